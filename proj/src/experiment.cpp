#include "lstar/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lstar/error.hpp"

namespace lstar {

std::vector<PgapEntry> parse_dataset(std::istream& in) {
  std::vector<PgapEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> cols;
    std::string t;
    while (ss >> t) cols.push_back(t);
    if (cols.empty() || cols[0][0] == '#') continue;
    if (cols.size() != 8)
      throw DataError("dataset line " + std::to_string(lineno) + ": expected 8 columns, found " +
                      std::to_string(cols.size()));
    PgapEntry e{cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], cols[6], 0};
    if (cols[7] == "1")
      e.label = 1;
    else if (cols[7] == "2")
      e.label = 2;
    else
      throw DataError("dataset line " + std::to_string(lineno) + ": label must be 1 or 2, got '" + cols[7] + "'");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<PgapEntry> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset " + path);
  try {
    return parse_dataset(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string PgapMode::name() const {
  switch (kind) {
    case Kind::CogebraA: return "cogebra-a";
    case Kind::CogebraB: return "cogebra-b";
    case Kind::Cofree: {
      if (k == 1.0) return "cofree";
      char buf[48];
      std::snprintf(buf, sizeof buf, "cofree(k=%g)", k);
      return buf;
    }
    case Kind::Full: return "full";
  }
  return "?";
}

PgapMode PgapMode::parse(const std::string& s, double k) {
  if (s == "cogebra-a") return {Kind::CogebraA, k};
  if (s == "cogebra-b") return {Kind::CogebraB, k};
  if (s == "cofree") return {Kind::Cofree, k};
  if (s == "full") return {Kind::Full, k};
  throw DataError("unknown composition mode '" + s + "'");
}

std::vector<PgapMode> PgapMode::all(double k) {
  return {{Kind::CogebraA, k}, {Kind::CogebraB, k}, {Kind::Cofree, k}, {Kind::Full, k}};
}

Tensor apply_subject(const Tensor& c, const Tensor& subject) {
  if (c.rank() != 2 || subject.rank() != 1 || c.shape()[0] != subject.size())
    throw DataError("verb matrix and subject vector do not fit");
  const std::size_t rows = c.shape()[0], cols = c.shape()[1];
  Tensor out({cols});
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j] += c[i * cols + j] * subject[i];
  return out;
}

Tensor basis_sum(std::size_t d) {
  Tensor s({d});
  for (std::size_t i = 0; i < d; ++i) s[i] += 1.0;  // sum_i n_i
  return s;
}

Tensor ones_vector(std::size_t d, double k) { return Tensor({d}, k); }

namespace {

const Tensor* lookup(const TypedLexicon& lex, const std::string& w, const ComposeOptions& opts) {
  if (lex.has(w)) return &lex.at(w).tensor;
  if (!opts.zero_unknown) throw DataError("word '" + w + "' is not in the lexicon");
  if (opts.unknown) opts.unknown->push_back(w);
  return nullptr;
}

Tensor as_matrix(const Tensor& t, std::size_t d, const std::string& w) {
  if (t.rank() == 2 && t.shape()[0] == d && t.shape()[1] == d) return t;
  throw DataError("verb '" + w + "' is not a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
}

}  // namespace

Tensor compose_pgap(const PhraseWords& w, const PgapMode& mode, const TypedLexicon& lex, const ComposeOptions& opts) {
  const Tensor* pa = lookup(lex, w.a, opts);
  const Tensor* pb = lookup(lex, w.b, opts);
  const Tensor* pc = lookup(lex, w.c, opts);
  const Tensor* pd = lookup(lex, w.d, opts);

  std::size_t d = 0;
  for (const Tensor* t : {pa, pb})
    if (t) d = t->size();
  for (const Tensor* t : {pc, pd})
    if (t && !d) d = t->shape()[0];
  if (!d) throw DataError("no word of the phrase has a vector; cannot infer the dimension");

  Tensor a = pa ? *pa : Tensor({d});
  Tensor b = pb ? *pb : Tensor({d});
  Tensor c = pc ? as_matrix(*pc, d, w.c) : Tensor({d, d});
  Tensor dm = pd ? as_matrix(*pd, d, w.d) : Tensor({d, d});
  if (a.shape() != std::vector<std::size_t>{d} || b.shape() != std::vector<std::size_t>{d})
    throw DataError("noun vectors of '" + w.a + "' and '" + w.b + "' must both have dimension " + std::to_string(d));

  Tensor cb = apply_subject(c, b);  // C x B
  switch (mode.kind) {
    case PgapMode::Kind::CogebraA:
      return hadamard(a, cb) + matvec(dm, basis_sum(d));
    case PgapMode::Kind::CogebraB:
      return hadamard(basis_sum(d), cb) + matvec(dm, a);
    case PgapMode::Kind::Cofree: {
      Tensor k = ones_vector(d, mode.k);
      Tensor left = hadamard(a, cb) + matvec(dm, k);
      Tensor right = hadamard(k, cb) + matvec(dm, a);
      return left + right;
    }
    case PgapMode::Kind::Full:
      return hadamard(a, cb) + matvec(dm, a);
  }
  return a;
}

double cosine(const Tensor& u, const Tensor& v) {
  if (u.shape() != v.shape()) throw DataError("cosine of tensors with different shapes");
  double nu = std::sqrt(dot(u, u)), nv = std::sqrt(dot(v, v));
  if (nu == 0.0 || nv == 0.0) return 0.0;
  double c = dot(u, v) / (nu * nv);
  return std::clamp(c, -1.0, 1.0);
}

Report evaluate(const std::vector<PgapEntry>& dataset, const std::vector<PgapMode>& modes, const TypedLexicon& lex,
                bool zero_unknown) {
  if (dataset.empty()) throw DataError("dataset is empty");
  Report r;
  r.n_entries = dataset.size();
  std::vector<std::string> unknown;
  ComposeOptions opts{zero_unknown, &unknown};
  for (const auto& mode : modes) {
    ModeReport mr;
    mr.mode = mode;
    double correct = 0, ap = 0;
    for (const auto& e : dataset) {
      Tensor land = compose_pgap({e.a, e.b, e.c, e.prep, e.d}, mode, lex, opts);
      Tensor p1 = compose_pgap({e.a, e.b, e.c1, e.prep, e.d}, mode, lex, opts);
      Tensor p2 = compose_pgap({e.a, e.b, e.c2, e.prep, e.d}, mode, lex, opts);
      EntryScore s;
      s.sim_c1 = cosine(land, p1);
      s.sim_c2 = cosine(land, p2);
      double good = e.label == 1 ? s.sim_c1 : s.sim_c2;
      double bad = e.label == 1 ? s.sim_c2 : s.sim_c1;
      if (good > bad) {
        s.correct = 1.0;
        s.ap = 1.0;
      } else if (good < bad) {
        s.correct = 0.0;
        s.ap = 0.5;
      } else {
        s.correct = 0.5;
        s.ap = 0.75;
        ++mr.ties;
      }
      correct += s.correct;
      ap += s.ap;
      mr.entries.push_back(s);
    }
    mr.accuracy = correct / static_cast<double>(dataset.size());
    mr.map = ap / static_cast<double>(dataset.size());
    r.modes.push_back(std::move(mr));
  }
  std::set<std::string> u(unknown.begin(), unknown.end());
  r.unknown_words.assign(u.begin(), u.end());
  return r;
}

nlohmann::json report_to_json(const Report& r) {
  nlohmann::json j;
  j["entries"] = r.n_entries;
  j["unknown_words"] = r.unknown_words;
  auto modes = nlohmann::json::array();
  for (const auto& m : r.modes) {
    nlohmann::json jm;
    jm["mode"] = m.mode.name();
    jm["accuracy"] = m.accuracy;
    jm["map"] = m.map;
    jm["ties"] = m.ties;
    auto es = nlohmann::json::array();
    for (const auto& e : m.entries)
      es.push_back({{"sim_c1", e.sim_c1}, {"sim_c2", e.sim_c2}, {"correct", e.correct}, {"ap", e.ap}});
    jm["per_entry"] = es;
    modes.push_back(jm);
  }
  j["modes"] = modes;
  return j;
}

std::string report_table(const Report& r) {
  std::size_t w = 5;
  for (const auto& m : r.modes) w = std::max(w, m.mode.name().size());
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s | %8s | %6s | %4s\n", static_cast<int>(w), "Model", "Accuracy", "MAP", "Ties");
  os << buf << std::string(w, '-') << "-+----------+--------+-----\n";
  for (const auto& m : r.modes) {
    std::snprintf(buf, sizeof buf, "%-*s | %8.4f | %6.4f | %4zu\n", static_cast<int>(w), m.mode.name().c_str(),
                  m.accuracy, m.map, m.ties);
    os << buf;
  }
  os << "entries: " << r.n_entries << "\n";
  if (!r.unknown_words.empty()) {
    os << "zeroed unknown words:";
    for (const auto& u : r.unknown_words) os << " " << u;
    os << "\n";
  }
  return os.str();
}

TypedLexicon build_pgap_lexicon(const std::vector<PgapEntry>& dataset, const EmbeddingTable& emb,
                                const TriplesCorpus& corpus, std::vector<std::string>* warnings) {
  TypedLexicon lex;
  lex.lowercase = emb.lowercase;
  auto key = [&](const std::string& w) { return emb.lowercase ? fold_case(w) : w; };
  auto add_noun = [&](const std::string& w, const char* type) {
    if (lex.entries.count(key(w))) return;
    if (!emb.has(w)) {
      if (warnings) warnings->push_back("no embedding for '" + w + "'");
      return;
    }
    lex.entries[key(w)] = LexEntry{parse_formula(type), emb.vector(w), SourceKind::Embedding};
  };
  auto add_verb = [&](const std::string& w, const char* type, SourceKind kind) {
    if (lex.entries.count(key(w))) return;
    try {
      lex.entries[key(w)] = LexEntry{parse_formula(type), build_relational_verb(w, corpus, emb, warnings), kind};
    } catch (const DataError& e) {
      if (warnings) warnings->push_back(e.what());
    }
  };
  for (const auto& e : dataset) {
    add_noun(e.a, "N");
    add_noun(e.b, "NP");
    for (const auto* v : {&e.c, &e.c1, &e.c2}) add_verb(*v, "(NP\\S)/NP", SourceKind::CopyObject);
    add_verb(e.d, "NP/NP", SourceKind::Relational);
  }
  return lex;
}

}  // namespace lstar
