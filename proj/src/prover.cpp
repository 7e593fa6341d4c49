#include "lstar/prover.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

namespace lstar {

namespace {

using Formulas = std::vector<Formula>;

// A backward rule application: the instance plus the premises it leaves to prove.
struct Step {
  Rule rule;
  RuleData data;
  std::vector<Sequent> premises;
};

Formulas slice(const Formulas& v, std::size_t from, std::size_t to) {
  return Formulas(v.begin() + static_cast<std::ptrdiff_t>(from),
                  v.begin() + static_cast<std::ptrdiff_t>(to));
}

Formulas moved(const Formulas& v, std::size_t from, std::size_t to) {
  Formulas out = v;
  Formula f = out[from];
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(from));
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(to), f);
  return out;
}

void add_counts(const Formula& f, int sign, std::map<std::string, int>& counts) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      counts[f.name()] += sign;
      break;
    case Formula::Kind::Unit:
      break;
    case Formula::Kind::Bang:
      add_counts(f.body(), sign, counts);
      break;
    case Formula::Kind::Product:
      add_counts(f.left(), sign, counts);
      add_counts(f.right(), sign, counts);
      break;
    case Formula::Kind::Under:
    case Formula::Kind::Over:
      add_counts(f.result(), sign, counts);
      add_counts(f.argument(), -sign, counts);
      break;
  }
}

// Atom-count balance. Necessary for provability once no contraction is left on the branch;
// every other rule (including !L, !R, perm) preserves the count with !A counted as A.
bool balanced(const Sequent& s) {
  std::map<std::string, int> counts;
  for (const auto& f : s.antecedent) add_counts(f, 1, counts);
  add_counts(s.succedent, -1, counts);
  return std::all_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second == 0; });
}

// Block permutations are only worth trying when they land the !-formula at the start of an
// argument block: right after some B/A, or right before some A\B. Single steps are always tried.
bool enabling_target(const Formulas& premise, std::size_t t) {
  return (t > 0 && premise[t - 1].is(Formula::Kind::Over)) ||
         (t + 1 < premise.size() && premise[t + 1].is(Formula::Kind::Under));
}

// Alternatives in search order: axiom, right rules, !R, contraction, moves of unsettled
// !-formulas, !L, left rules, moves of settled !-formulas.
std::vector<Step> expand(const Sequent& s, std::size_t contractions, std::size_t perms) {
  std::vector<Step> steps;
  const Formulas& ant = s.antecedent;
  const Formula& succ = s.succedent;
  const std::size_t n = ant.size();

  if (n == 1 && ant[0] == succ) steps.push_back({Rule::Axiom, {}, {}});

  if (succ.is(Formula::Kind::Over)) {
    Formulas prem = ant;
    prem.push_back(succ.argument());
    steps.push_back({Rule::OverR, {}, {Sequent{prem, succ.result()}}});
  }
  if (succ.is(Formula::Kind::Under)) {
    Formulas prem{succ.argument()};
    prem.insert(prem.end(), ant.begin(), ant.end());
    steps.push_back({Rule::UnderR, {}, {Sequent{prem, succ.result()}}});
  }
  if (succ.is(Formula::Kind::Bang) &&
      std::all_of(ant.begin(), ant.end(), [](const Formula& f) { return f.is(Formula::Kind::Bang); }))
    steps.push_back({Rule::BangR, {}, {Sequent{ant, succ.body()}}});

  std::set<std::string> seen;  // structural steps that lead to an already-listed premise
  auto fresh = [&](const Sequent& p) { return seen.insert(p.text()).second; };

  if (contractions > 0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!ant[i].is(Formula::Kind::Bang)) continue;
      Formulas prem = ant;
      prem.insert(prem.begin() + static_cast<std::ptrdiff_t>(i), ant[i]);
      Sequent p{prem, succ};
      if (fresh(p)) steps.push_back({Rule::Contr, {i, 0}, {p}});
    }
  }

  // A !-formula already sitting where a neighbouring slash wants its body is settled; moving
  // it again is tried only after everything else. A copy next to it keeps it unsettled.
  auto settled = [&](std::size_t j) {
    const Formula& b = ant[j].body();
    if ((j > 0 && ant[j - 1] == ant[j]) || (j + 1 < n && ant[j + 1] == ant[j])) return false;
    return (j > 0 && ant[j - 1].is(Formula::Kind::Over) && ant[j - 1].argument() == b) ||
           (j + 1 < n && ant[j + 1].is(Formula::Kind::Under) && ant[j + 1].argument() == b);
  };
  auto perm_moves = [&](bool settled_pass) {
    if (perms == 0) return;
    seen.insert(s.text());
    for (std::size_t i = 0; i < n; ++i) {
      if (!ant[i].is(Formula::Kind::Bang) || settled(i) != settled_pass) continue;
      for (std::size_t k = 1; k <= i; ++k) {
        Formulas prem = moved(ant, i, i - k);
        if (k > 1 && !enabling_target(prem, i - k)) continue;
        Sequent p{prem, succ};
        if (fresh(p)) steps.push_back({Rule::Perm1, {i, k}, {p}});
      }
      for (std::size_t k = 1; i + k < n; ++k) {
        Formulas prem = moved(ant, i, i + k);
        if (k > 1 && !enabling_target(prem, i + k)) continue;
        Sequent p{prem, succ};
        if (fresh(p)) steps.push_back({Rule::Perm2, {i, k}, {p}});
      }
    }
  };

  perm_moves(false);

  for (std::size_t i = 0; i < n; ++i) {
    if (!ant[i].is(Formula::Kind::Bang)) continue;
    Formulas prem = ant;
    prem[i] = ant[i].body();
    Sequent p{prem, succ};
    if (fresh(p)) steps.push_back({Rule::BangL, {i, 0}, {p}});
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Formula& f = ant[i];
    if (f.is(Formula::Kind::Over)) {
      for (std::size_t k = 0; i + 1 + k <= n; ++k) {
        Formulas rest = slice(ant, 0, i);
        rest.push_back(f.result());
        for (std::size_t j = i + 1 + k; j < n; ++j) rest.push_back(ant[j]);
        steps.push_back({Rule::OverL,
                         {i, k},
                         {Sequent{slice(ant, i + 1, i + 1 + k), f.argument()}, Sequent{rest, succ}}});
      }
    } else if (f.is(Formula::Kind::Under)) {
      for (std::size_t k = 0; k <= i; ++k) {
        Formulas rest = slice(ant, 0, i - k);
        rest.push_back(f.result());
        for (std::size_t j = i + 1; j < n; ++j) rest.push_back(ant[j]);
        steps.push_back({Rule::UnderL,
                         {i, k},
                         {Sequent{slice(ant, i - k, i), f.argument()}, Sequent{rest, succ}}});
      }
    }
  }

  perm_moves(true);
  return steps;
}

std::size_t remaining_contractions(const Step& st, std::size_t c) {
  return st.rule == Rule::Contr ? c - 1 : c;
}
std::size_t remaining_perms(const Step& st, std::size_t p) {
  return st.rule == Rule::Perm1 || st.rule == Rule::Perm2 ? p - 1 : p;
}

std::string memo_key(const Sequent& s, std::size_t c, std::size_t p) {
  return s.text() + "#" + std::to_string(c) + "," + std::to_string(p);
}

class FirstProofSearch {
 public:
  std::optional<Derivation> run(const Sequent& s, const SearchBudget& b) {
    return search(s, b.max_contractions, b.max_perm_moves, b.max_depth).proof;
  }

 private:
  struct Outcome {
    std::optional<Derivation> proof;
    bool pruned = false;     // some branch was cut by the on-path subsumption check
    bool depth_cut = false;  // some branch ran out of depth
  };

  struct MemoEntry {
    std::optional<Derivation> proof;
    std::size_t proof_height = 0;
    std::size_t failed_up_to = 0;  // fails for every depth <= this
  };

  static constexpr std::size_t kAllDepths = std::numeric_limits<std::size_t>::max();

  Outcome search(const Sequent& s, std::size_t c, std::size_t p, std::size_t depth) {
    if (depth == 0) return {std::nullopt, false, true};
    if (c == 0 && !balanced(s)) return {};

    const std::string key = memo_key(s, c, p);
    if (auto it = memo_.find(key); it != memo_.end()) {
      const MemoEntry& e = it->second;
      if (e.proof && e.proof_height <= depth) return {e.proof, false, false};
      if (e.failed_up_to >= depth) return {};
    }

    // A sequent already open on this path with at least this budget subsumes the current goal.
    const std::string text = s.text();
    auto& open = on_path_[text];
    for (auto [oc, op] : open)
      if (oc >= c && op >= p) return {std::nullopt, true, false};
    open.emplace_back(c, p);

    Outcome out;
    for (const Step& st : expand(s, c, p)) {
      const std::size_t nc = remaining_contractions(st, c);
      const std::size_t np = remaining_perms(st, p);
      std::vector<Derivation> premises;
      bool failed = false;
      for (const Sequent& prem : st.premises) {
        Outcome sub = search(prem, nc, np, depth - 1);
        out.pruned |= sub.pruned;
        out.depth_cut |= sub.depth_cut;
        if (!sub.proof) {
          failed = true;
          break;
        }
        premises.push_back(std::move(*sub.proof));
      }
      if (failed) continue;
      out.proof = Derivation{s, st.rule, st.data, std::move(premises)};
      break;
    }

    open.pop_back();
    MemoEntry& e = memo_[key];
    if (out.proof) {
      if (!e.proof || out.proof->height() < e.proof_height) {
        e.proof = out.proof;
        e.proof_height = out.proof->height();
      }
    } else if (!out.pruned) {
      e.failed_up_to = std::max(e.failed_up_to, out.depth_cut ? depth : kAllDepths);
    }
    return out;
  }

  std::unordered_map<std::string, MemoEntry> memo_;
  std::unordered_map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> on_path_;
};

class Enumerator {
 public:
  explicit Enumerator(std::size_t limit) : limit_(limit) {}

  std::vector<Derivation> run(const Sequent& s, const SearchBudget& b) {
    return collect(s, b.max_contractions, b.max_perm_moves, b.max_depth);
  }

 private:
  const std::vector<Derivation>& collect(const Sequent& s, std::size_t c, std::size_t p,
                                         std::size_t depth) {
    const std::string key = memo_key(s, c, p) + "@" + std::to_string(depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<Derivation> out;
    if (depth > 0 && (c > 0 || balanced(s))) {
      for (const Step& st : expand(s, c, p)) {
        if (out.size() >= limit_) break;
        const std::size_t nc = remaining_contractions(st, c);
        const std::size_t np = remaining_perms(st, p);
        if (st.premises.empty()) {
          out.push_back(Derivation{s, st.rule, st.data, {}});
        } else if (st.premises.size() == 1) {
          for (const auto& d : collect(st.premises[0], nc, np, depth - 1)) {
            if (out.size() >= limit_) break;
            out.push_back(Derivation{s, st.rule, st.data, {d}});
          }
        } else {
          const std::vector<Derivation>& lefts = collect(st.premises[0], nc, np, depth - 1);
          if (lefts.empty()) continue;
          const std::vector<Derivation>& rights = collect(st.premises[1], nc, np, depth - 1);
          for (const auto& l : lefts) {
            for (const auto& r : rights) {
              if (out.size() >= limit_) break;
              out.push_back(Derivation{s, st.rule, st.data, {l, r}});
            }
          }
        }
      }
    }
    return memo_[key] = std::move(out);
  }

  std::size_t limit_;
  std::unordered_map<std::string, std::vector<Derivation>> memo_;
};

}  // namespace

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Axiom: return "Axiom";
    case Rule::OverL: return "OverL";
    case Rule::OverR: return "OverR";
    case Rule::UnderL: return "UnderL";
    case Rule::UnderR: return "UnderR";
    case Rule::BangL: return "BangL";
    case Rule::BangR: return "BangR";
    case Rule::Perm1: return "Perm1";
    case Rule::Perm2: return "Perm2";
    case Rule::Contr: return "Contr";
  }
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
  for (Rule r : {Rule::Axiom, Rule::OverL, Rule::OverR, Rule::UnderL, Rule::UnderR, Rule::BangL,
                 Rule::BangR, Rule::Perm1, Rule::Perm2, Rule::Contr})
    if (rule_name(r) == name) return r;
  return std::nullopt;
}

std::size_t Derivation::height() const {
  std::size_t h = 0;
  for (const auto& p : premises) h = std::max(h, p.height());
  return h + 1;
}

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.node_count();
  return n;
}

std::size_t Derivation::count(Rule r) const {
  std::size_t n = rule == r ? 1 : 0;
  for (const auto& p : premises) n += p.count(r);
  return n;
}

std::optional<Derivation> prove(const Sequent& s, const SearchBudget& budget) {
  return FirstProofSearch{}.run(s, budget);
}

std::vector<Derivation> prove_all(const Sequent& s, const SearchBudget& budget,
                                  std::size_t limit) {
  if (limit == 0) return {};
  std::vector<Derivation> found = Enumerator(limit).run(s, budget);

  std::vector<std::pair<std::pair<std::size_t, std::string>, std::size_t>> order;
  std::set<std::string> distinct;
  for (std::size_t i = 0; i < found.size(); ++i) {
    std::string key = to_json(found[i]).dump();
    if (distinct.insert(key).second) order.push_back({{found[i].node_count(), std::move(key)}, i});
  }
  std::sort(order.begin(), order.end());
  std::vector<Derivation> out;
  for (const auto& o : order) out.push_back(std::move(found[o.second]));
  return out;
}

nlohmann::json to_json(const Derivation& d) {
  nlohmann::json premises = nlohmann::json::array();
  for (const auto& p : d.premises) premises.push_back(to_json(p));
  return {{"rule", rule_name(d.rule)},
          {"rule_data", {{"index", d.data.index}, {"span", d.data.span}}},
          {"conclusion", d.conclusion.text()},
          {"premises", std::move(premises)}};
}

Derivation derivation_from_json(const nlohmann::json& j) {
  Derivation d;
  auto rule = rule_from_name(j.at("rule").get<std::string>());
  if (!rule) throw std::invalid_argument("unknown rule '" + j.at("rule").get<std::string>() + "'");
  d.rule = *rule;
  if (j.contains("rule_data")) {
    d.data.index = j["rule_data"].value("index", std::size_t{0});
    d.data.span = j["rule_data"].value("span", std::size_t{0});
  }
  d.conclusion = parse_sequent(j.at("conclusion").get<std::string>());
  for (const auto& p : j.value("premises", nlohmann::json::array()))
    d.premises.push_back(derivation_from_json(p));
  return d;
}

namespace {
void pretty_rec(const Derivation& d, std::size_t indent, std::string& out) {
  out.append(indent * 2, ' ');
  out += d.conclusion.text() + "   (" + rule_name(d.rule);
  switch (d.rule) {
    case Rule::OverL:
    case Rule::UnderL:
    case Rule::Perm1:
    case Rule::Perm2:
      out += " " + std::to_string(d.data.index) + ":" + std::to_string(d.data.span);
      break;
    case Rule::BangL:
    case Rule::Contr:
      out += " " + std::to_string(d.data.index);
      break;
    default:
      break;
  }
  out += ")\n";
  for (const auto& p : d.premises) pretty_rec(p, indent + 1, out);
}
}  // namespace

std::string pretty(const Derivation& d) {
  std::string out;
  pretty_rec(d, 0, out);
  return out;
}

}  // namespace lstar
