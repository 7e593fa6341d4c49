#include <algorithm>
#include <array>

#include "lstar/prover.hpp"

namespace lstar {

namespace {

using Formulas = std::vector<Formula>;

Formulas slice(const Formulas& v, std::size_t from, std::size_t to) {
  return Formulas(v.begin() + static_cast<std::ptrdiff_t>(from),
                  v.begin() + static_cast<std::ptrdiff_t>(to));
}

Formulas concat(std::initializer_list<Formulas> parts) {
  Formulas out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Matches one node against its schema; an empty string means the node is legal.
std::string check_node(const Derivation& d) {
  const Formulas& ant = d.conclusion.antecedent;
  const Formula& succ = d.conclusion.succedent;
  const std::size_t n = ant.size();
  const std::size_t i = d.data.index;
  const std::size_t k = d.data.span;

  auto expect = [&](std::initializer_list<Sequent> want) -> std::string {
    if (d.premises.size() != want.size())
      return "expected " + std::to_string(want.size()) + " premises, found " +
             std::to_string(d.premises.size());
    std::size_t p = 0;
    for (const Sequent& s : want) {
      if (!(d.premises[p].conclusion == s))
        return "premise " + std::to_string(p) + " is '" + d.premises[p].conclusion.text() +
               "', schema requires '" + s.text() + "'";
      ++p;
    }
    return {};
  };
  auto no_data = [&]() { return i == 0 && k == 0; };
  auto bang_at = [&](std::size_t j) { return j < n && ant[j].is(Formula::Kind::Bang); };

  switch (d.rule) {
    case Rule::Axiom:
      if (!no_data()) return "axiom carries rule data";
      if (n != 1 || !(ant[0] == succ)) return "not of the form A => A";
      return expect({});

    case Rule::OverR:
      if (!no_data()) return "/R carries rule data";
      if (!succ.is(Formula::Kind::Over)) return "succedent is not B/A";
      return expect({Sequent{concat({ant, {succ.argument()}}), succ.result()}});

    case Rule::UnderR:
      if (!no_data()) return "\\R carries rule data";
      if (!succ.is(Formula::Kind::Under)) return "succedent is not A\\B";
      return expect({Sequent{concat({{succ.argument()}, ant}), succ.result()}});

    case Rule::OverL: {
      if (i >= n || !ant[i].is(Formula::Kind::Over)) return "index does not point at B/A";
      if (i + 1 + k > n) return "Γ runs past the antecedent";
      const Formula& f = ant[i];
      return expect({Sequent{slice(ant, i + 1, i + 1 + k), f.argument()},
                     Sequent{concat({slice(ant, 0, i), {f.result()}, slice(ant, i + 1 + k, n)}),
                             succ}});
    }

    case Rule::UnderL: {
      if (i >= n || !ant[i].is(Formula::Kind::Under)) return "index does not point at A\\B";
      if (k > i) return "Γ runs past the antecedent";
      const Formula& f = ant[i];
      return expect({Sequent{slice(ant, i - k, i), f.argument()},
                     Sequent{concat({slice(ant, 0, i - k), {f.result()}, slice(ant, i + 1, n)}),
                             succ}});
    }

    case Rule::BangL: {
      if (k != 0) return "!L carries a span";
      if (!bang_at(i)) return "index does not point at a !-formula";
      Formulas prem = ant;
      prem[i] = ant[i].body();
      return expect({Sequent{prem, succ}});
    }

    case Rule::BangR:
      if (!no_data()) return "!R carries rule data";
      if (!succ.is(Formula::Kind::Bang)) return "succedent is not !B";
      if (!std::all_of(ant.begin(), ant.end(),
                       [](const Formula& f) { return f.is(Formula::Kind::Bang); }))
        return "!R needs every antecedent formula to be !-ed";
      return expect({Sequent{ant, succ.body()}});

    case Rule::Perm1: {
      if (!bang_at(i)) return "perm moves a formula that is not !-ed";
      if (k == 0 || k > i) return "perm block out of range";
      return expect({Sequent{
          concat({slice(ant, 0, i - k), {ant[i]}, slice(ant, i - k, i), slice(ant, i + 1, n)}),
          succ}});
    }

    case Rule::Perm2: {
      if (!bang_at(i)) return "perm moves a formula that is not !-ed";
      if (k == 0 || i + k >= n) return "perm block out of range";
      return expect({Sequent{concat({slice(ant, 0, i), slice(ant, i + 1, i + 1 + k), {ant[i]},
                                     slice(ant, i + 1 + k, n)}),
                             succ}});
    }

    case Rule::Contr: {
      if (k != 0) return "contraction carries a span";
      if (!bang_at(i)) return "contracted formula is not !-ed";
      return expect({Sequent{concat({slice(ant, 0, i + 1), slice(ant, i, n)}), succ}});
    }
  }
  return "unknown rule";
}

CheckResult check_rec(const Derivation& d, const std::string& path) {
  std::string err = check_node(d);
  if (!err.empty())
    return {false, "(" + rule_name(d.rule) + ") at " + path + " '" + d.conclusion.text() + "': " + err};
  for (std::size_t p = 0; p < d.premises.size(); ++p) {
    CheckResult r = check_rec(d.premises[p], path + "/" + std::to_string(p));
    if (!r) return r;
  }
  return {};
}

}  // namespace

CheckResult check(const Derivation& d) { return check_rec(d, "root"); }

}  // namespace lstar
