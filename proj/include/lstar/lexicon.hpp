#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "lstar/formula.hpp"
#include "lstar/tensor.hpp"

namespace lstar {

std::string fold_case(const std::string& word);

struct EmbeddingTable {
  std::size_t dim = 0;
  bool lowercase = true;
  std::map<std::string, std::vector<double>> vectors;

  bool has(const std::string& word) const;
  Tensor vector(const std::string& word) const;  // DataError when missing
};

// One word per line followed by its coordinates. A leading "count dim" line is skipped.
// Ragged rows and non-numeric entries are errors; a repeated word keeps its last row and
// adds a warning.
EmbeddingTable parse_embeddings(std::istream& in, bool lowercase = true,
                                std::vector<std::string>* warnings = nullptr);
EmbeddingTable load_embeddings(const std::string& path, bool lowercase = true,
                               std::vector<std::string>* warnings = nullptr);

struct Triple {
  std::string subject;
  std::string verb;
  std::string object;
  double count = 1;
};

struct TriplesCorpus {
  std::vector<Triple> records;
};

// subject<TAB>verb<TAB>object<TAB>count; blank lines and lines starting with '#' are skipped.
TriplesCorpus parse_triples(std::istream& in, bool lowercase = true);
TriplesCorpus load_triples(const std::string& path, bool lowercase = true);

// Count-weighted sum of subject (x) object over the verb's triples, as a d x d matrix.
// Triples whose subject or object has no embedding are skipped with a warning.
Tensor build_relational_verb(const std::string& verb, const TriplesCorpus& corpus,
                             const EmbeddingTable& emb, std::vector<std::string>* warnings = nullptr);
// Same matrix; the entry is marked so phrase composition uses obj (.) (C x subj).
Tensor build_copy_object_verb(const std::string& verb, const TriplesCorpus& corpus,
                              const EmbeddingTable& emb, std::vector<std::string>* warnings = nullptr);

// A d x d copy-object matrix C spread onto the legs [subj, S, obj] of a transitive verb:
// T[i][s][j] = C[i][s] * delta(s, j).
Tensor expand_copy_object(const Tensor& c);

enum class SourceKind { Embedding, Relational, CopyObject, TensorFile };
std::string source_kind_name(SourceKind k);

struct LexEntry {
  Formula type = Formula::unit();
  Tensor tensor;
  SourceKind kind = SourceKind::Embedding;

  bool copy_object() const { return kind == SourceKind::CopyObject; }
};

struct TypedLexicon {
  std::map<std::string, LexEntry> entries;
  bool lowercase = true;

  bool has(const std::string& word) const;
  const LexEntry& at(const std::string& word) const;  // DataError when missing
};

struct LexiconSources {
  const EmbeddingTable* embeddings = nullptr;
  const TriplesCorpus* triples = nullptr;
  std::string base_dir;  // tensor-file paths are relative to this
};

// Checks a tensor against the leg profile of a type. Copy-object verbs may use the collapsed
// d x d form when all three legs have dimension d.
void validate_entry(const std::string& word, const LexEntry& e, const SpaceAssignment& spaces);

// {word: {"type": formula, "source": {"kind": ..., "args": [...]}}}, or the materialized form
// written by lexicon_to_json: {word: {"type", "kind", "shape", "data"}}.
TypedLexicon assign_types(const nlohmann::json& spec, const SpaceAssignment& spaces,
                          const LexiconSources& sources, bool lowercase = true,
                          std::vector<std::string>* warnings = nullptr);
TypedLexicon load_lexicon(const std::string& path, const SpaceAssignment& spaces,
                          const LexiconSources& sources, bool lowercase = true,
                          std::vector<std::string>* warnings = nullptr);

nlohmann::json lexicon_to_json(const TypedLexicon& lex);

// Atoms along the tensor legs of a type, in leg order (a bang contributes its body's legs).
std::vector<std::string> leg_atoms(const Formula& f);

// Atom dimensions read off the entries of a lexicon spec: embedding entries give the table's
// dimension, literal and materialized tensors their shapes. Conflicts are DataErrors.
SpaceAssignment infer_spaces(const nlohmann::json& spec, const LexiconSources& sources);

}  // namespace lstar
