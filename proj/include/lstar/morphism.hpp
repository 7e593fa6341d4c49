#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lstar/formula.hpp"
#include "lstar/prover.hpp"

namespace lstar {

// Objects of the free biclosed category over the atoms. Tensor products are kept strict:
// a Tensor object always has at least two factors, none of them Unit or Tensor.
class ObjectTerm {
 public:
  enum class Kind { Unit, Base, Tensor, HomR, HomL, Bang };

  static ObjectTerm unit();
  static ObjectTerm base(std::string atom);
  // Flattens nested tensors and drops units; zero factors give Unit, one gives the factor.
  static ObjectTerm tensor(const std::vector<ObjectTerm>& factors);
  static ObjectTerm hom_r(const ObjectTerm& a, const ObjectTerm& b);  // A => B
  static ObjectTerm hom_l(const ObjectTerm& a, const ObjectTerm& b);  // A <= B
  static ObjectTerm bang(const ObjectTerm& body);

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }
  const std::string& atom() const { return node_->atom; }
  const std::vector<ObjectTerm>& children() const { return node_->children; }
  const ObjectTerm& child(std::size_t i) const { return node_->children.at(i); }

  // The strict factor list: [] for Unit, the factors for Tensor, [*this] otherwise.
  std::vector<ObjectTerm> factors() const;

  const std::string& text() const { return node_->text; }
  bool operator==(const ObjectTerm& o) const { return node_ == o.node_ || text() == o.text(); }
  bool operator!=(const ObjectTerm& o) const { return !(*this == o); }

 private:
  struct Node {
    Kind kind;
    std::string atom;
    std::vector<ObjectTerm> children;
    std::string text;
  };
  explicit ObjectTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static ObjectTerm make(Kind k, std::string atom, std::vector<ObjectTerm> children);

  std::shared_ptr<const Node> node_;
};

// Product -> Tensor, Under -> HomR, Over -> HomL, Bang -> Bang, Unit -> Unit.
ObjectTerm interpret_formula(const Formula& f);
ObjectTerm interpret_antecedent(const std::vector<Formula>& antecedent);

// Morphism terms. Generators carry the objects they are indexed by:
//
//   EvR(A,B)      A * (A => B) -> B
//   EvL(A,B)      (A <= B) * B -> A
//   CurryL(A,f)   f : A * C -> B        gives C -> (A => B)
//   CurryR(A,f)   f : C * A -> B        gives C -> (B <= A)
//   CopyDelta(A)  !A -> !A * !A         CounitE(A)  !A -> I
//   Epsilon(A)    !A -> A               DeltaComonad(A)  !A -> !!A
//   LaxM(A1..An)  !!A1 * .. * !!An -> !(!A1 * .. * !An)
//   BangF(f)      !dom f -> !cod f
//   SwapR(A,B)    A * !B -> !B * A      SwapL(A,B)  !A * B -> B * !A
class MorphTerm {
 public:
  enum class Op {
    Id, Compose, Par, EvR, EvL, CurryL, CurryR, CopyDelta, CounitE, Epsilon,
    DeltaComonad, LaxM, BangF, SwapR, SwapL
  };

  static MorphTerm id(const ObjectTerm& a);
  static MorphTerm compose(const MorphTerm& later, const MorphTerm& earlier);
  static MorphTerm par(const MorphTerm& f, const MorphTerm& g);
  static MorphTerm ev_r(const ObjectTerm& a, const ObjectTerm& b);
  static MorphTerm ev_l(const ObjectTerm& a, const ObjectTerm& b);
  static MorphTerm curry_l(const ObjectTerm& a, const MorphTerm& f);
  static MorphTerm curry_r(const ObjectTerm& a, const MorphTerm& f);
  static MorphTerm copy_delta(const ObjectTerm& a);
  static MorphTerm counit_e(const ObjectTerm& a);
  static MorphTerm epsilon(const ObjectTerm& a);
  static MorphTerm delta_comonad(const ObjectTerm& a);
  static MorphTerm lax_m(const std::vector<ObjectTerm>& as);
  static MorphTerm bang_f(const MorphTerm& f);
  static MorphTerm swap_r(const ObjectTerm& a, const ObjectTerm& b);
  static MorphTerm swap_l(const ObjectTerm& a, const ObjectTerm& b);

  Op op() const { return node_->op; }
  bool is(Op o) const { return node_->op == o; }
  const std::vector<ObjectTerm>& objects() const { return node_->objects; }
  const ObjectTerm& object(std::size_t i) const { return node_->objects.at(i); }
  const std::vector<MorphTerm>& args() const { return node_->args; }
  const MorphTerm& arg(std::size_t i) const { return node_->args.at(i); }

  bool operator==(const MorphTerm& o) const;

 private:
  struct Node {
    Op op;
    std::vector<ObjectTerm> objects;
    std::vector<MorphTerm> args;
  };
  explicit MorphTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static MorphTerm make(Op op, std::vector<ObjectTerm> objects, std::vector<MorphTerm> args);

  std::shared_ptr<const Node> node_;
};

std::string op_name(MorphTerm::Op op);

struct TypedMorphism {
  MorphTerm term;
  ObjectTerm domain;
  ObjectTerm codomain;
};

// (domain, codomain). Throws TypeError naming the path to the offending subterm.
std::pair<ObjectTerm, ObjectTerm> typecheck(const MorphTerm& t);

// Builds the soundness construction for every node. Throws TypeError on a derivation that
// does not check.
TypedMorphism compile(const Derivation& d);

// Removes identity compositions and identity/unit tensor factors.
MorphTerm simplify(const MorphTerm& t);

// Number of occurrences of a generator.
std::size_t count_op(const MorphTerm& t, MorphTerm::Op op);
// Maximal subterms built only from swaps, identities, Compose and Par that contain a swap.
std::size_t count_swap_composites(const MorphTerm& t);

nlohmann::json to_json(const MorphTerm& t);
nlohmann::json to_json(const TypedMorphism& m);

// Graphviz digraphs: derivations as proof trees (one node per sequent), morphisms as wiring
// graphs with one node per generator.
std::string export_dot(const Derivation& d);
std::string export_dot(const TypedMorphism& m);

}  // namespace lstar
