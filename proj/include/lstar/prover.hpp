#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lstar/formula.hpp"

namespace lstar {

enum class Rule { Axiom, OverL, OverR, UnderL, UnderR, BangL, BangR, Perm1, Perm2, Contr };

std::string rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);

// Positions that pin down a rule instance, all relative to the conclusion antecedent.
//
//   OverL   index of B/A, span = |Γ| (Γ follows it)
//   UnderL  index of A\B, span = |Γ| (Γ precedes it)
//   BangL   index of !A
//   Contr   index of !A
//   Perm1   index of !A, span = |Γ| (Γ precedes it; the premise has !A before Γ)
//   Perm2   index of !A, span = |Γ| (Γ follows it; the premise has !A after Γ)
//
// Unused fields stay zero.
struct RuleData {
  std::size_t index = 0;
  std::size_t span = 0;

  bool operator==(const RuleData&) const = default;
};

struct Derivation {
  Sequent conclusion;
  Rule rule = Rule::Axiom;
  RuleData data;
  std::vector<Derivation> premises;

  std::size_t height() const;
  std::size_t node_count() const;
  std::size_t count(Rule r) const;
};

struct SearchBudget {
  std::size_t max_contractions = 1;
  std::size_t max_perm_moves = 4;
  std::size_t max_depth = 64;
};

struct CheckResult {
  bool ok = true;
  std::string message;  // first failure, empty when ok

  explicit operator bool() const { return ok; }
};

// Verifies every node against its rule schema. Needs no search.
CheckResult check(const Derivation& d);

// Depth-first backward search. Contractions and permutation moves are counted per branch;
// max_depth bounds the derivation height (a lone axiom has height 1).
std::optional<Derivation> prove(const Sequent& s, const SearchBudget& budget = {});

// Up to `limit` distinct derivations, sorted by (node count, serialized form).
std::vector<Derivation> prove_all(const Sequent& s, const SearchBudget& budget,
                                  std::size_t limit);

nlohmann::json to_json(const Derivation& d);
Derivation derivation_from_json(const nlohmann::json& j);

// Indented tree, one sequent per line, premises below their conclusion.
std::string pretty(const Derivation& d);

}  // namespace lstar
