#include <chrono>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"

#include "lstar/prover.hpp"

using namespace lstar;

namespace {

Sequent seq(const char* s) { return parse_sequent(s); }

const Derivation& left_branch(const Derivation& d) {
  const Derivation* l = oracle::find_conclusion(d, parse_sequent(oracle::kParasiticLeft));
  REQUIRE(l != nullptr);
  return *l;
}

}  // namespace

TEST_CASE("declarative sentence") {
  auto d = prove(seq(oracle::kSentence), {0, 0, 30});
  REQUIRE(d);
  CHECK(check(*d));
  CHECK(d->conclusion == seq(oracle::kSentence));
  CHECK(d->node_count() == 7);
}

TEST_CASE("relative clause needs neither contraction nor permutation") {
  auto d = prove(seq(oracle::kRelative), {0, 0, 40});
  REQUIRE(d);
  CHECK(check(*d));
  CHECK(d->count(Rule::Contr) == 0);
  CHECK(d->count(Rule::Perm1) + d->count(Rule::Perm2) == 0);
}

TEST_CASE("parasitic gap under the stated budget") {
  auto d = prove(seq(oracle::kParasitic), {1, 2, 60});
  REQUIRE(d);
  CHECK(check(*d));
  const Derivation& l = left_branch(*d);
  CHECK(l.count(Rule::Contr) == 1);
  CHECK(l.count(Rule::Perm1) == 2);
  CHECK(l.count(Rule::Perm2) == 0);
  CHECK(l.count(Rule::BangL) == 2);
  CHECK(d->count(Rule::Contr) == 1);
  CHECK(d->count(Rule::Perm1) == 2);
}

TEST_CASE("parasitic gap is out of reach without contraction") {
  CHECK_FALSE(prove(seq(oracle::kParasitic), {0, 4, 64}));
}

TEST_CASE("small cases") {
  auto ax = prove(seq("A => A"));
  REQUIRE(ax);
  CHECK(ax->rule == Rule::Axiom);
  CHECK_FALSE(prove(seq("A => B")));
  CHECK_FALSE(prove(seq("NP, N => S"), {2, 8, 64}));
  CHECK(prove(seq("=> A/A")));
  CHECK(prove(seq("!A => !A")));
  CHECK(prove(seq("!A => A")));
  CHECK(prove(seq("!A => A/A")) == std::nullopt);
}

TEST_CASE("budgets gate permutation and contraction") {
  // !A has to travel left past B before B\(A\C) can use the B
  Sequent s = seq("B, !A, B\\(A\\C) => C");
  CHECK_FALSE(prove(s, {0, 0, 20}));
  auto d = prove(s, {0, 1, 20});
  REQUIRE(d);
  CHECK(d->count(Rule::Perm1) == 1);
  Sequent twice = seq("!A, A\\(A\\B) => B");
  CHECK_FALSE(prove(twice, {0, 4, 20}));
  auto c = prove(twice, {1, 4, 20});
  REQUIRE(c);
  CHECK(c->count(Rule::Contr) == 1);
  CHECK_FALSE(prove(seq(oracle::kSentence), {0, 0, 2}));
}

TEST_CASE("bang right needs a fully banged antecedent") {
  auto d = prove(seq("!A => !!A"), {0, 0, 10});
  REQUIRE(d);
  CHECK(d->count(Rule::BangR) >= 1);
  CHECK_FALSE(prove(seq("A => !A")));
}

TEST_CASE("enumeration") {
  auto one = prove_all(seq("A, A\\A => A"), {}, 5);
  CHECK(one.size() >= 1);
  auto many = prove_all(seq(oracle::kSentence), {}, 10);
  REQUIRE_FALSE(many.empty());
  for (const auto& d : many) CHECK(check(d));
  for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i - 1].node_count() <= many[i].node_count());
  CHECK(prove_all(seq("A => B"), {}, 5).empty());
}

TEST_CASE("hand transcribed derivations check") {
  CHECK(check(oracle::john_signed_the_papers()));
  CHECK(check(oracle::papers_that_john_signed()));
  CHECK(check(oracle::parasitic_gap_left()));
  CHECK(check(oracle::parasitic_gap_right()));
  Derivation full = oracle::parasitic_gap();
  CheckResult r = check(full);
  CHECK_MESSAGE(r.ok, r.message);
  CHECK(full.count(Rule::Contr) == 1);
  CHECK(full.count(Rule::Perm1) == 2);
  CHECK(full.count(Rule::BangL) == 2);
}

TEST_CASE("checker rejects broken derivations") {
  Derivation d = oracle::john_signed_the_papers();
  d.premises[0].conclusion = seq("M => M");  // axiom atom renamed
  CheckResult r = check(d);
  CHECK_FALSE(r.ok);
  CHECK(r.message.find("root") != std::string::npos);

  Derivation bad;
  bad.conclusion = seq("!A, B => !C");
  bad.rule = Rule::BangR;
  Derivation top;
  top.conclusion = seq("!A, B => C");
  top.rule = Rule::Axiom;
  bad.premises.push_back(top);
  CHECK_FALSE(check(bad));
}

TEST_CASE("json round trip") {
  Derivation d = oracle::parasitic_gap();
  Derivation back = derivation_from_json(to_json(d));
  CHECK(to_json(back) == to_json(d));
  CHECK(check(back));
  for (Rule r : {Rule::Axiom, Rule::OverL, Rule::OverR, Rule::UnderL, Rule::UnderR, Rule::BangL, Rule::BangR,
                 Rule::Perm1, Rule::Perm2, Rule::Contr})
    CHECK(rule_from_name(rule_name(r)) == r);
  CHECK_FALSE(rule_from_name("Cut"));
}

TEST_CASE("agrees with exhaustive search on the bang-free fragment") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> atoms{"A", "B"};
  int provable = 0;
  for (int t = 0; t < 400; ++t) {
    Sequent s;
    int budget = 5;
    std::size_t n = 1 + rng() % 4;
    for (std::size_t i = 0; i < n && budget >= 0; ++i) {
      int size = static_cast<int>(rng() % 3);
      if (size > budget) size = budget;
      budget -= size;
      s.antecedent.push_back(oracle::random_formula(rng, atoms, size, 0.0));
    }
    s.succedent = oracle::random_formula(rng, atoms, std::max(0, budget) % 3, 0.0);
    std::size_t connectives = s.succedent.size();
    for (const auto& f : s.antecedent) connectives += f.size();
    bool expected = oracle::provable_l(s, connectives + 1);
    auto d = prove(s, {0, 0, 64});
    CAPTURE(s.text());
    CHECK(d.has_value() == expected);
    if (d) {
      CHECK(check(*d));
      CHECK(oracle::tree_valid(*d));
    }
    provable += expected;
  }
  CHECK(provable > 20);
}

TEST_CASE("generated derivations are accepted and their sequents provable") {
  oracle::DerivationGenerator gen(11);
  int found = 0;
  for (int t = 0; t < 300; ++t) {
    Derivation d = gen.next();
    REQUIRE(oracle::tree_valid(d));
    CheckResult r = check(d);
    CHECK_MESSAGE(r.ok, r.message);
    auto p = prove(d.conclusion, {2, 4, 24});
    if (p) {
      ++found;
      CHECK(check(*p));
    }
  }
  CHECK(found > 100);
}

TEST_CASE("single node mutations") {
  oracle::DerivationGenerator gen(5);
  std::mt19937_64 rng(99);
  int broken = 0;
  for (int t = 0; t < 600; ++t) {
    Derivation d = gen.next();
    auto m = oracle::mutate(d, rng);
    if (!m) continue;
    bool valid = oracle::tree_valid(*m);
    CAPTURE(to_json(*m).dump());
    CHECK(check(*m).ok == valid);
    broken += !valid;
  }
  CHECK(broken > 300);
}

