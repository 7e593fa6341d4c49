#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "lstar/lexicon.hpp"
#include "lstar/tensor.hpp"

namespace lstar {

// "A's that the B C'ed Prep D'ing", with C1 and C2 substituted for C in the two candidates.
struct PgapEntry {
  std::string a, b, c, prep, d, c1, c2;
  int label = 1;  // which candidate is the good reading

  const std::string& good() const { return label == 1 ? c1 : c2; }
  const std::string& bad() const { return label == 1 ? c2 : c1; }
};

// Columns: A B C Prep D C1 C2 label (tab- or space-separated). '#' lines are comments.
std::vector<PgapEntry> parse_dataset(std::istream& in);
std::vector<PgapEntry> load_dataset(const std::string& path);

// The four ways of feeding the shared object A to the two verbs.
//   cogebra-a  A (.) (C x B) + D 1
//   cogebra-b  (C x B) + D A
//   cofree     [A (.) (C x B) + D k] + [k (.) (C x B) + D A]
//   full       A (.) (C x B) + D A
struct PgapMode {
  enum class Kind { CogebraA, CogebraB, Cofree, Full };
  Kind kind = Kind::Full;
  double k = 1.0;

  std::string name() const;
  static PgapMode parse(const std::string& s, double k = 1.0);  // DataError on unknown names
  static std::vector<PgapMode> all(double k = 1.0);
};

// C x B: contracts the subject leg of the verb matrix.
Tensor apply_subject(const Tensor& c, const Tensor& subject);
// The basis sum of the Cogebra readings and the ones vector of the Cofree reading; equal in
// coordinates, kept apart to keep the two readings visible.
Tensor basis_sum(std::size_t d);
Tensor ones_vector(std::size_t d, double k = 1.0);

struct PhraseWords {
  std::string a, b, c, prep, d;
};

struct ComposeOptions {
  bool zero_unknown = false;                   // missing words become zero vectors
  std::vector<std::string>* unknown = nullptr;  // receives the words that were zeroed
};

// Prep is vector addition of its two arguments.
Tensor compose_pgap(const PhraseWords& words, const PgapMode& mode, const TypedLexicon& lex,
                    const ComposeOptions& opts = {});

// Inner product over the product of norms; 0 when either vector is zero.
double cosine(const Tensor& u, const Tensor& v);

struct EntryScore {
  double sim_c1 = 0, sim_c2 = 0;
  double correct = 0;  // 1, 0, or 0.5 on a tie
  double ap = 0;       // 1 when the good candidate ranks first, 0.5 second, 0.75 on a tie
};

struct ModeReport {
  PgapMode mode;
  double accuracy = 0;
  double map = 0;
  std::size_t ties = 0;
  std::vector<EntryScore> entries;
};

struct Report {
  std::size_t n_entries = 0;
  std::vector<ModeReport> modes;
  std::vector<std::string> unknown_words;  // sorted, unique
};

Report evaluate(const std::vector<PgapEntry>& dataset, const std::vector<PgapMode>& modes,
                const TypedLexicon& lex, bool zero_unknown = false);

nlohmann::json report_to_json(const Report& r);
// Model | Accuracy | MAP | Ties
std::string report_table(const Report& r);

// Nouns (A, B) from embeddings typed N and NP, main and candidate verbs as copy-object
// (NP\S)/NP, the secondary verb as a relational NP/NP. Words that cannot be built are left
// out (and listed in `warnings`) so that composition can report them.
TypedLexicon build_pgap_lexicon(const std::vector<PgapEntry>& dataset, const EmbeddingTable& emb,
                                const TriplesCorpus& corpus, std::vector<std::string>* warnings = nullptr);

}  // namespace lstar
