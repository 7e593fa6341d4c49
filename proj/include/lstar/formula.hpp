#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace lstar {

// Syntax tree of a !L* type. Immutable and cheap to copy; children are shared.
//
//   Atom     NP
//   Unit     ()            (the empty type; dropped from antecedents)
//   Product  (A, B)        right-nested, never with a Unit child
//   Under    A\B
//   Over     B/A
//   Bang     !A
class Formula {
 public:
  enum class Kind { Atom, Unit, Product, Under, Over, Bang };

  static Formula atom(std::string name);
  static Formula unit();
  // Normalizes: unit children are dropped and nested products re-associate to the right.
  static Formula product(const Formula& left, const Formula& right);
  static Formula under(const Formula& left, const Formula& right);
  static Formula over(const Formula& left, const Formula& right);
  static Formula bang(const Formula& body);

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }

  const std::string& name() const;  // Atom only
  const Formula& left() const;      // Product, Under, Over
  const Formula& right() const;     // Product, Under, Over
  const Formula& body() const;      // Bang

  // For `A\B` the argument is A and the result B; for `B/A` likewise.
  const Formula& argument() const;
  const Formula& result() const;

  // Minimal-parenthesis rendering; also the canonical identity of the tree.
  const std::string& text() const { return node_->text; }

  // Number of connectives; strictly decreases along every logical rule.
  std::size_t size() const { return node_->size; }

  bool operator==(const Formula& other) const {
    return node_ == other.node_ || node_->text == other.node_->text;
  }
  bool operator<(const Formula& other) const { return node_->text < other.node_->text; }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Formula> children;
    std::string text;
    std::size_t size = 0;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, std::string name, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

// Ordered antecedent and a single succedent. An empty antecedent is allowed.
struct Sequent {
  std::vector<Formula> antecedent;
  Formula succedent = Formula::unit();

  std::string text() const;
  bool operator==(const Sequent& other) const;
};

Formula parse_formula(std::string_view text);
std::string print_formula(const Formula& f);

// Accepts "=>" or the Unicode turnstile. Unit formulas are dropped from the antecedent.
Sequent parse_sequent(std::string_view text);

// True when the atom name is nonempty and uses only [A-Za-z0-9_].
bool valid_atom_name(std::string_view name);

// All atom names occurring in `f`, sorted and unique.
std::vector<std::string> atoms_of(const Formula& f);

bool contains_bang(const Formula& f);

}  // namespace lstar
