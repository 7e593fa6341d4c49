#include "lstar/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lstar/error.hpp"

namespace lstar {

std::string fold_case(const std::string& word) {
  std::string out = word;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

namespace {

std::string key(const std::string& w, bool lowercase) { return lowercase ? fold_case(w) : w; }

bool parse_double(const std::string& tok, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(tok, &used);
    return used == tok.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

bool is_count(const std::string& tok) {
  return !tok.empty() && std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

void warn(std::vector<std::string>* w, std::string msg) {
  if (w) w->push_back(std::move(msg));
}

}  // namespace

bool EmbeddingTable::has(const std::string& word) const {
  return vectors.count(key(word, lowercase)) != 0;
}

Tensor EmbeddingTable::vector(const std::string& word) const {
  auto it = vectors.find(key(word, lowercase));
  if (it == vectors.end()) throw DataError("no embedding for '" + word + "'");
  return Tensor::vector(it->second);
}

EmbeddingTable parse_embeddings(std::istream& in, bool lowercase, std::vector<std::string>* warnings) {
  EmbeddingTable t;
  t.lowercase = lowercase;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (first) {
      first = false;
      if (toks.size() == 2 && is_count(toks[0]) && is_count(toks[1])) continue;  // word2vec header
    }
    std::vector<double> v;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      double x = 0;
      if (!parse_double(toks[i], x))
        throw DataError("embeddings line " + std::to_string(lineno) + ": '" + toks[i] + "' is not a number");
      v.push_back(x);
    }
    if (v.empty()) throw DataError("embeddings line " + std::to_string(lineno) + ": no coordinates");
    if (t.dim == 0) t.dim = v.size();
    if (v.size() != t.dim)
      throw DataError("embeddings line " + std::to_string(lineno) + ": " + std::to_string(v.size()) +
                      " coordinates, expected " + std::to_string(t.dim));
    std::string w = key(toks[0], lowercase);
    if (t.vectors.count(w)) warn(warnings, "duplicate embedding for '" + w + "' on line " + std::to_string(lineno) + "; keeping the last");
    t.vectors[w] = std::move(v);
  }
  if (t.vectors.empty()) throw DataError("embedding table is empty");
  return t;
}

EmbeddingTable load_embeddings(const std::string& path, bool lowercase, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings file " + path);
  try {
    return parse_embeddings(in, lowercase, warnings);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

TriplesCorpus parse_triples(std::istream& in, bool lowercase) {
  TriplesCorpus c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 4)
      throw DataError("triples line " + std::to_string(lineno) + ": expected 4 tab-separated columns, found " +
                      std::to_string(cols.size()));
    double n = 0;
    if (!parse_double(cols[3], n) || n < 1)
      throw DataError("triples line " + std::to_string(lineno) + ": count '" + cols[3] + "' must be at least 1");
    for (int i = 0; i < 3; ++i)
      if (cols[static_cast<std::size_t>(i)].empty())
        throw DataError("triples line " + std::to_string(lineno) + ": empty word");
    c.records.push_back({key(cols[0], lowercase), key(cols[1], lowercase), key(cols[2], lowercase), n});
  }
  return c;
}

TriplesCorpus load_triples(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open triples file " + path);
  try {
    return parse_triples(in, lowercase);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

Tensor build_relational_verb(const std::string& verb, const TriplesCorpus& corpus, const EmbeddingTable& emb,
                             std::vector<std::string>* warnings) {
  const std::string v = key(verb, emb.lowercase);
  const std::size_t d = emb.dim;
  Tensor m({d, d});
  bool seen = false, used = false;
  for (const auto& t : corpus.records) {
    if (key(t.verb, emb.lowercase) != v) continue;
    seen = true;
    if (!emb.has(t.subject) || !emb.has(t.object)) {
      warn(warnings, "skipping triple (" + t.subject + ", " + t.verb + ", " + t.object + "): no embedding for " +
                         (emb.has(t.subject) ? t.object : t.subject));
      continue;
    }
    used = true;
    m = m + t.count * outer(emb.vector(t.subject), emb.vector(t.object));
  }
  if (!seen) throw DataError("verb '" + verb + "' does not occur in the triples corpus");
  if (!used) throw DataError("verb '" + verb + "' has no triples with embedded arguments");
  return m;
}

Tensor build_copy_object_verb(const std::string& verb, const TriplesCorpus& corpus, const EmbeddingTable& emb,
                              std::vector<std::string>* warnings) {
  return build_relational_verb(verb, corpus, emb, warnings);
}

Tensor expand_copy_object(const Tensor& c) {
  if (c.rank() != 2 || c.shape()[0] != c.shape()[1])
    throw DataError("copy-object matrix must be square");
  const std::size_t d = c.shape()[0];
  Tensor t({d, d, d});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t s = 0; s < d; ++s) t[(i * d + s) * d + s] = c[i * d + s];
  return t;
}

std::string source_kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::Embedding: return "embedding";
    case SourceKind::Relational: return "relational";
    case SourceKind::CopyObject: return "copy-object";
    case SourceKind::TensorFile: return "tensor-file";
  }
  return "?";
}

namespace {

SourceKind kind_from_name(const std::string& word, const std::string& s) {
  if (s == "embedding") return SourceKind::Embedding;
  if (s == "relational") return SourceKind::Relational;
  if (s == "copy-object") return SourceKind::CopyObject;
  if (s == "tensor-file") return SourceKind::TensorFile;
  throw DataError("lexicon entry '" + word + "': unknown source kind '" + s + "'");
}

std::string shape_text(const std::vector<std::size_t>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

}  // namespace

bool TypedLexicon::has(const std::string& word) const { return entries.count(key(word, lowercase)) != 0; }

const LexEntry& TypedLexicon::at(const std::string& word) const {
  auto it = entries.find(key(word, lowercase));
  if (it == entries.end()) throw DataError("word '" + word + "' is not in the lexicon");
  return it->second;
}

void validate_entry(const std::string& word, const LexEntry& e, const SpaceAssignment& spaces) {
  std::vector<std::size_t> want;
  try {
    want = spaces.legs(interpret_formula(e.type), CopyMode::cogebra());
  } catch (const EvalError& err) {
    throw DataError("lexicon entry '" + word + "': " + err.what());
  }
  const auto& got = e.tensor.shape();
  if (got == want) return;
  if (e.copy_object() && want.size() == 3 && want[0] == want[1] && want[1] == want[2] && got.size() == 2 &&
      got[0] == want[0] && got[1] == want[0])
    return;
  throw DataError("lexicon entry '" + word + "' of type " + e.type.text() + " needs shape " + shape_text(want) +
                  ", got " + shape_text(got));
}

TypedLexicon assign_types(const nlohmann::json& spec, const SpaceAssignment& spaces, const LexiconSources& sources,
                          bool lowercase, std::vector<std::string>* warnings) {
  if (!spec.is_object()) throw DataError("lexicon must be a JSON object mapping words to entries");
  TypedLexicon lex;
  lex.lowercase = lowercase;
  for (const auto& [word, entry] : spec.items()) {
    try {
      if (!entry.is_object() || !entry.contains("type") || !entry["type"].is_string())
        throw DataError("lexicon entry '" + word + "' needs a string \"type\"");
      LexEntry e;
      try {
        e.type = parse_formula(entry["type"].get<std::string>());
      } catch (const ParseError& pe) {
        throw DataError("lexicon entry '" + word + "': " + pe.what());
      }
      if (entry.contains("data")) {
        // materialized form
        e.kind = kind_from_name(word, entry.value("kind", std::string("tensor-file")));
        std::vector<std::size_t> shape = entry.at("shape").get<std::vector<std::size_t>>();
        std::vector<double> data = entry.at("data").get<std::vector<double>>();
        try {
          e.tensor = Tensor(shape, std::move(data));
        } catch (const EvalError& err) {
          throw DataError("lexicon entry '" + word + "': " + err.what());
        }
      } else {
        if (!entry.contains("source") || !entry["source"].is_object())
          throw DataError("lexicon entry '" + word + "' needs a \"source\" object");
        const auto& src = entry["source"];
        e.kind = kind_from_name(word, src.value("kind", std::string()));
        std::vector<std::string> args;
        if (src.contains("args")) args = src["args"].get<std::vector<std::string>>();
        std::string arg = args.empty() ? word : args[0];
        switch (e.kind) {
          case SourceKind::Embedding:
            if (!sources.embeddings) throw DataError("lexicon entry '" + word + "' needs an embeddings file");
            e.tensor = sources.embeddings->vector(arg);
            break;
          case SourceKind::Relational:
          case SourceKind::CopyObject:
            if (!sources.embeddings || !sources.triples)
              throw DataError("lexicon entry '" + word + "' needs embeddings and a triples corpus");
            e.tensor = build_relational_verb(arg, *sources.triples, *sources.embeddings, warnings);
            break;
          case SourceKind::TensorFile: {
            if (args.empty()) throw DataError("lexicon entry '" + word + "': tensor-file needs a path argument");
            std::filesystem::path p(arg);
            if (p.is_relative() && !sources.base_dir.empty()) p = std::filesystem::path(sources.base_dir) / p;
            e.tensor = load_tensor(p.string());
            break;
          }
        }
      }
      validate_entry(word, e, spaces);
      lex.entries[key(word, lowercase)] = std::move(e);
    } catch (const nlohmann::json::exception& je) {
      throw DataError("lexicon entry '" + word + "': " + je.what());
    }
  }
  return lex;
}

TypedLexicon load_lexicon(const std::string& path, const SpaceAssignment& spaces, const LexiconSources& sources,
                          bool lowercase, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  LexiconSources s = sources;
  if (s.base_dir.empty()) s.base_dir = std::filesystem::path(path).parent_path().string();
  return assign_types(j, spaces, s, lowercase, warnings);
}

nlohmann::json lexicon_to_json(const TypedLexicon& lex) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [w, e] : lex.entries) {
    j[w] = {{"type", e.type.text()},
            {"kind", source_kind_name(e.kind)},
            {"shape", e.tensor.shape()},
            {"data", e.tensor.data()}};
  }
  return j;
}

std::vector<std::string> leg_atoms(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom: return {f.name()};
    case Formula::Kind::Unit: return {};
    case Formula::Kind::Bang: return leg_atoms(f.body());
    default: {
      auto l = leg_atoms(f.left());
      auto r = leg_atoms(f.right());
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
  }
}

SpaceAssignment infer_spaces(const nlohmann::json& spec, const LexiconSources& sources) {
  SpaceAssignment s;
  if (!spec.is_object()) return s;
  auto assign = [&](const std::string& word, const std::string& atom, std::size_t d) {
    if (s.has(atom) && s.atom_dim(atom) != d)
      throw DataError("lexicon entry '" + word + "' gives " + atom + " dimension " + std::to_string(d) +
                      ", another entry gave " + std::to_string(s.atom_dim(atom)));
    s.set(atom, d);
  };
  for (const auto& [word, entry] : spec.items()) {
    if (!entry.is_object() || !entry.contains("type") || !entry["type"].is_string()) continue;
    std::vector<std::string> atoms;
    try {
      atoms = leg_atoms(parse_formula(entry["type"].get<std::string>()));
    } catch (const ParseError&) {
      continue;  // reported properly by assign_types
    }
    std::vector<std::size_t> shape;
    std::string kind;
    if (entry.contains("shape")) {
      shape = entry["shape"].get<std::vector<std::size_t>>();
      kind = entry.value("kind", std::string());
    } else if (entry.contains("source") && entry["source"].is_object()) {
      const auto& src = entry["source"];
      kind = src.value("kind", std::string());
      std::vector<std::string> args;
      if (src.contains("args")) args = src["args"].get<std::vector<std::string>>();
      if (kind == "embedding" && sources.embeddings) {
        shape = {sources.embeddings->dim};
      } else if ((kind == "relational" || kind == "copy-object") && sources.embeddings) {
        shape = {sources.embeddings->dim, sources.embeddings->dim};
      } else if (kind == "tensor-file" && !args.empty()) {
        std::filesystem::path p(args[0]);
        if (p.is_relative() && !sources.base_dir.empty()) p = std::filesystem::path(sources.base_dir) / p;
        shape = load_tensor(p.string()).shape();
      }
    }
    if (shape.size() == atoms.size()) {
      for (std::size_t i = 0; i < atoms.size(); ++i) assign(word, atoms[i], shape[i]);
    } else if (kind == "copy-object" && atoms.size() == 3 && shape.size() == 2 && shape[0] == shape[1]) {
      for (const auto& a : atoms) assign(word, a, shape[0]);
    }
  }
  return s;
}

}  // namespace lstar
