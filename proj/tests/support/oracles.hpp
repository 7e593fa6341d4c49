#pragma once

// Independent reference implementations used by the unit tests and the acceptance runner.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lstar/formula.hpp"
#include "lstar/prover.hpp"
#include "lstar/tensor.hpp"

namespace oracle {

using lstar::Derivation;
using lstar::Formula;
using lstar::Sequent;
using lstar::Tensor;

Tensor random_tensor(std::mt19937_64& rng, std::vector<std::size_t> shape, double lo = -1, double hi = 1);

// ---- proofs

// Exhaustive backward search in the product-free Lambek calculus with empty antecedents
// allowed. No memo, no pruning; bang-free sequents only.
bool provable_l(const Sequent& s, std::size_t depth);

Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& atoms, int max_size,
                       double bang_rate);

// Forward generator: grows derivations from axioms by applying random rules to a pool.
// Every rule of the calculus is reachable. Antecedents stay at most `max_ant` long.
class DerivationGenerator {
 public:
  explicit DerivationGenerator(std::uint64_t seed, std::size_t max_ant = 6);
  Derivation next();

 private:
  std::optional<Derivation> step();
  std::mt19937_64 rng_;
  std::size_t max_ant_;
  std::vector<Derivation> pool_;
};

// Forward re-derivation of a single node: does the rule, applied to the premises' conclusions
// with the node's data, yield its conclusion? Written without reference to the library checker.
bool node_valid(const Derivation& d);
bool tree_valid(const Derivation& d);

// One random single-node mutation, or nullopt when the chosen operator does not apply.
std::optional<Derivation> mutate(const Derivation& d, std::mt19937_64& rng);

// First node (preorder) whose conclusion is `s`, or nullptr.
const Derivation* find_conclusion(const Derivation& d, const Sequent& s);

// Derivations copied by hand from the worked examples.
Derivation john_signed_the_papers();
Derivation papers_that_john_signed();
Derivation parasitic_gap_left();   // the left branch under /R
Derivation parasitic_gap_right();  // NP/N, N, N\N => NP
Derivation parasitic_gap();

extern const char* const kSentence;  // "John signed the papers"
extern const char* const kRelative;  // "The papers that John signed"
extern const char* const kParasitic; // "The papers that John signed without reading"
extern const char* const kParasiticLeft;

// ---- tensors (plain loops, leg orders as documented in the library)

// signed[i][s][j], the[n][m]
Tensor sentence_value(const Tensor& john, const Tensor& sgn, const Tensor& the, const Tensor& papers);

// without(John, signed(-, n), reading(n)) with without[a][b][c][d][e] over legs
// NP S NP S NP and reading[x][y].
Tensor gap_value(const Tensor& john, const Tensor& sgn, const Tensor& without, const Tensor& reading,
                 const Tensor& n);

// the(that(paper, sum_i e_i (x) gap_value(.., e_i))) with that[n1][n2][s][i], the[np][n].
Tensor phrase_value_basis_bound(const Tensor& the, const Tensor& paper, const Tensor& that, const Tensor& john,
                                const Tensor& sgn, const Tensor& without, const Tensor& reading);

// The four parasitic gap formulas, term by term.
Tensor pgap_formula(const std::string& mode, const Tensor& a, const Tensor& b, const Tensor& c, const Tensor& d,
                    double k);

// Comonoid law sides, built from the library's copy_delta and counit_e by linear extension
// over basis vectors. coassoc_* are d x d x d, counit_* are d-vectors that should equal v.
Tensor coassoc_left(const Tensor& v, const lstar::CopyMode& mode);   // (delta (x) id) delta
Tensor coassoc_right(const Tensor& v, const lstar::CopyMode& mode);  // (id (x) delta) delta
Tensor counit_left(const Tensor& v, const lstar::CopyMode& mode);    // (e (x) id) delta
Tensor counit_right(const Tensor& v, const lstar::CopyMode& mode);   // (id (x) e) delta

// ---- misc

// Recursive descent over the Graphviz subset a digraph exporter could emit:
// digraph ID { stmt* } with node, edge and attribute statements.
bool dot_well_formed(const std::string& text, std::string* error = nullptr);

struct RunResult {
  int code = -1;
  std::string out;
};
// Runs a shell command line, capturing stdout.
RunResult run(const std::string& command);

}  // namespace oracle
