#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lstar/error.hpp"
#include "lstar/experiment.hpp"
#include "lstar/formula.hpp"
#include "lstar/lexicon.hpp"
#include "lstar/morphism.hpp"
#include "lstar/prover.hpp"
#include "lstar/tensor.hpp"

using namespace lstar;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kNoProof = 1, kUsage = 2, kData = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoProof : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::size_t max_contractions = 1;
  std::size_t max_perm_moves = 4;
  std::size_t max_depth = 64;
  std::string mode;  // comma list
  double k = 1.0;
  std::string dims;
  std::string format = "json";
  std::string out;
  std::string embeddings, triples, lexicon, dataset;
  bool no_lowercase = false;
  bool zero_unknown = false;
  bool quiet = false;

  SearchBudget budget() const { return {max_contractions, max_perm_moves, max_depth}; }
  bool lowercase() const { return !no_lowercase; }
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw DataError("cannot write " + cfg.out);
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << text;
}

void warn_all(const RunConfig& cfg, const std::vector<std::string>& ws) {
  if (cfg.quiet) return;
  for (const auto& w : ws) std::cerr << "warning: " << w << "\n";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, sep))
    if (!t.empty()) out.push_back(t);
  return out;
}

std::vector<std::string> words_of(const std::string& phrase) {
  std::istringstream in(phrase);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

CopyMode copy_mode(const RunConfig& cfg) {
  std::string m = cfg.mode.empty() ? "cogebra-a" : cfg.mode;
  if (m == "cogebra" || m == "cogebra-a" || m == "cogebra-b") return CopyMode::cogebra();
  if (m == "cofree") return CopyMode::cofree(cfg.k);
  if (m == "full") return CopyMode::full();
  if (m == "fock") return CopyMode::fock();
  throw UsageError("unknown mode '" + m + "' (cogebra-a, cogebra-b, cofree, full, fock)");
}

std::vector<PgapMode> pgap_modes(const RunConfig& cfg) {
  if (cfg.mode.empty() || cfg.mode == "all") return PgapMode::all(cfg.k);
  std::vector<PgapMode> out;
  for (const auto& m : split(cfg.mode, ',')) {
    if (m == "fock") throw UsageError("fock has no parasitic-gap composition formula");
    try {
      out.push_back(PgapMode::parse(m, cfg.k));
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

Derivation prove_or_fail(const Sequent& s, const RunConfig& cfg) {
  auto d = prove(s, cfg.budget());
  if (!d) throw NoProof("no proof under budget");
  return *d;
}

json tensor_json(const Tensor& t) { return {{"shape", t.shape()}, {"data", t.data()}}; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// prove ---------------------------------------------------------------------

int cmd_prove(const std::string& text, const RunConfig& cfg) {
  Sequent s = parse_sequent(text);
  auto d = prove(s, cfg.budget());
  if (!d) {
    std::cout << "no proof under budget\n";
    return kNoProof;
  }
  if (cfg.format == "text")
    emit(cfg, pretty(*d));
  else
    emit(cfg, dump(to_json(*d)));
  return kOk;
}

// compile -------------------------------------------------------------------

int cmd_compile(const std::string& text, const RunConfig& cfg, const std::string& dot, const std::string& tree_dot,
                bool simplified) {
  Derivation d = prove_or_fail(parse_sequent(text), cfg);
  TypedMorphism m = compile(d);
  if (simplified) m.term = simplify(m.term);
  if (!dot.empty()) write_file(dot, export_dot(m));
  if (!tree_dot.empty()) write_file(tree_dot, export_dot(d));
  if (cfg.format == "text") {
    std::ostringstream os;
    os << m.domain.text() << " -> " << m.codomain.text() << "\n";
    using Op = MorphTerm::Op;
    for (Op op : {Op::EvR, Op::EvL, Op::CurryL, Op::CurryR, Op::CopyDelta, Op::CounitE, Op::Epsilon,
                  Op::DeltaComonad, Op::LaxM, Op::BangF, Op::SwapR, Op::SwapL}) {
      auto n = count_op(m.term, op);
      if (n) os << "  " << op_name(op) << " " << n << "\n";
    }
    emit(cfg, os.str());
  } else {
    emit(cfg, dump(to_json(m)));
  }
  return kOk;
}

// eval ----------------------------------------------------------------------

struct Sources {
  std::optional<EmbeddingTable> emb;
  std::optional<TriplesCorpus> triples;
  std::vector<std::string> warnings;

  LexiconSources view(const std::string& base) const {
    return {emb ? &*emb : nullptr, triples ? &*triples : nullptr, base};
  }
};

Sources load_sources(const RunConfig& cfg) {
  Sources s;
  if (!cfg.embeddings.empty()) s.emb = load_embeddings(cfg.embeddings, cfg.lowercase(), &s.warnings);
  if (!cfg.triples.empty()) s.triples = load_triples(cfg.triples, cfg.lowercase());
  return s;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

TypedLexicon load_typed(const RunConfig& cfg, const Sources& src, const json& spec, SpaceAssignment& spaces) {
  auto base = std::filesystem::path(cfg.lexicon).parent_path().string();
  SpaceAssignment inferred = infer_spaces(spec, src.view(base));
  for (const auto& [a, d] : inferred.dims())
    if (!spaces.has(a)) spaces.set(a, d);
  std::vector<std::string> ws;
  TypedLexicon lex = assign_types(spec, spaces, src.view(base), cfg.lowercase(), &ws);
  warn_all(cfg, ws);
  return lex;
}

int cmd_eval(const std::string& phrase, const RunConfig& cfg, const std::string& goal, bool pgap) {
  if (cfg.lexicon.empty()) throw UsageError("eval needs --lexicon");
  SpaceAssignment spaces = parse_dims(cfg.dims);
  Sources src = load_sources(cfg);
  warn_all(cfg, src.warnings);
  json spec = read_json(cfg.lexicon);
  TypedLexicon lex = load_typed(cfg, src, spec, spaces);
  auto words = words_of(phrase);
  if (words.empty()) throw UsageError("empty phrase");

  Tensor result;
  if (pgap) {
    if (words.size() != 5) throw UsageError("--pgap expects five words: A B C Prep D");
    auto modes = pgap_modes(cfg);
    if (modes.size() != 1) throw UsageError("--pgap evaluates one mode at a time");
    result = compose_pgap({words[0], words[1], words[2], words[3], words[4]}, modes[0], lex,
                          {cfg.zero_unknown, nullptr});
  } else {
    CopyMode mode = copy_mode(cfg);
    Sequent s;
    std::vector<Tensor> inputs;
    for (const auto& w : words) {
      const LexEntry& e = lex.at(w);
      s.antecedent.push_back(e.type);
      bool collapsed = e.copy_object() && e.tensor.rank() == 2 && leg_atoms(e.type).size() == 3;
      inputs.push_back(collapsed ? expand_copy_object(e.tensor) : e.tensor);
    }
    try {
      s.succedent = parse_formula(goal);
    } catch (const ParseError& e) {
      throw UsageError(std::string("--goal: ") + e.what());
    }
    Derivation d = prove_or_fail(s, cfg);
    result = eval_morphism(compile(d), inputs, mode, spaces);
  }
  if (cfg.format == "text")
    emit(cfg, format_tensor(result));
  else
    emit(cfg, dump(tensor_json(result)));
  return kOk;
}

// experiment ----------------------------------------------------------------

int cmd_experiment(const RunConfig& cfg, const std::string& table) {
  if (cfg.dataset.empty()) throw UsageError("experiment needs --dataset");
  auto modes = pgap_modes(cfg);
  auto dataset = load_dataset(cfg.dataset);
  if (dataset.empty()) throw DataError(cfg.dataset + ": dataset is empty");
  Sources src = load_sources(cfg);
  warn_all(cfg, src.warnings);

  TypedLexicon lex;
  if (!cfg.lexicon.empty()) {
    SpaceAssignment spaces = parse_dims(cfg.dims);
    lex = load_typed(cfg, src, read_json(cfg.lexicon), spaces);
  } else {
    if (!src.emb || !src.triples) throw UsageError("experiment needs --embeddings and --triples, or --lexicon");
    std::vector<std::string> ws;
    lex = build_pgap_lexicon(dataset, *src.emb, *src.triples, &ws);
    warn_all(cfg, ws);
  }
  Report r = evaluate(dataset, modes, lex, cfg.zero_unknown);
  if (!table.empty()) write_file(table, report_table(r));
  if (cfg.format == "text")
    emit(cfg, report_table(r));
  else
    emit(cfg, dump(report_to_json(r)));
  return kOk;
}

// lexicon-build -------------------------------------------------------------

int cmd_lexicon_build(const RunConfig& cfg) {
  Sources src = load_sources(cfg);
  warn_all(cfg, src.warnings);
  TypedLexicon lex;
  if (!cfg.lexicon.empty()) {
    SpaceAssignment spaces = parse_dims(cfg.dims);
    lex = load_typed(cfg, src, read_json(cfg.lexicon), spaces);
  } else if (!cfg.dataset.empty()) {
    if (!src.emb || !src.triples) throw UsageError("lexicon-build from a dataset needs --embeddings and --triples");
    std::vector<std::string> ws;
    lex = build_pgap_lexicon(load_dataset(cfg.dataset), *src.emb, *src.triples, &ws);
    warn_all(cfg, ws);
  } else {
    throw UsageError("lexicon-build needs --lexicon or --dataset");
  }
  emit(cfg, dump(lexicon_to_json(lex)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambek calculus with a copying modality: prover, compiler and tensor evaluator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file; flags given on the command line win");

  RunConfig cfg;
  app.add_option("--max-contractions", cfg.max_contractions, "Contr budget per branch")->capture_default_str();
  app.add_option("--max-perm-moves", cfg.max_perm_moves, "permutation budget per branch")->capture_default_str();
  app.add_option("--max-depth", cfg.max_depth, "proof height limit")->capture_default_str();
  app.add_option("--mode", cfg.mode, "cogebra-a|cogebra-b|cofree|full|fock (experiment: comma list or all)");
  app.add_option("--k", cfg.k, "cofree padding constant")->capture_default_str();
  app.add_option("--dims", cfg.dims, "atom dimensions, e.g. NP=3,S=2");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--out", cfg.out, "write the main output here instead of stdout");
  app.add_option("--embeddings", cfg.embeddings, "word vectors, one word per line");
  app.add_option("--triples", cfg.triples, "subject, verb, object, count (tab separated)");
  app.add_option("--lexicon", cfg.lexicon, "typed lexicon JSON");
  app.add_option("--dataset", cfg.dataset, "parasitic gap dataset");
  app.add_flag("--no-lowercase", cfg.no_lowercase, "keep word case when looking up");
  app.add_flag("--zero-unknown", cfg.zero_unknown, "give words outside the lexicon a zero vector");
  app.add_flag("-q,--quiet", cfg.quiet, "suppress warnings");

  std::string sequent_text, phrase, goal = "S", dot, tree_dot, table;
  bool simplified = false, pgap = false;

  auto* prove_cmd = app.add_subcommand("prove", "search for a derivation");
  prove_cmd->add_option("sequent", sequent_text, "e.g. \"NP, (NP\\S)/NP, NP/N, N => S\"")->required();
  prove_cmd->fallthrough();

  auto* compile_cmd = app.add_subcommand("compile", "prove, then build the morphism term");
  compile_cmd->add_option("sequent", sequent_text)->required();
  compile_cmd->add_option("--dot", dot, "write the wiring graph (Graphviz)");
  compile_cmd->add_option("--tree-dot", tree_dot, "write the proof tree (Graphviz)");
  compile_cmd->add_flag("--simplify", simplified, "drop identity clutter from the term");
  compile_cmd->fallthrough();

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a phrase against a typed lexicon");
  eval_cmd->add_option("phrase", phrase, "words separated by spaces")->required();
  eval_cmd->add_option("--goal", goal, "succedent type")->capture_default_str();
  eval_cmd->add_flag("--pgap", pgap, "phrase is \"A B C Prep D\"; use the closed composition formula");
  eval_cmd->fallthrough();

  auto* exp_cmd = app.add_subcommand("experiment", "parasitic gap disambiguation");
  exp_cmd->add_option("--table", table, "also write the text table here");
  exp_cmd->fallthrough();

  auto* lex_cmd = app.add_subcommand("lexicon-build", "materialize a lexicon with its tensors");
  lex_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (!std::isfinite(cfg.k)) {
    std::cerr << "error: --k must be finite\n";
    return kUsage;
  }

  try {
    if (*prove_cmd) return cmd_prove(sequent_text, cfg);
    if (*compile_cmd) return cmd_compile(sequent_text, cfg, dot, tree_dot, simplified);
    if (*eval_cmd) return cmd_eval(phrase, cfg, goal, pgap);
    if (*exp_cmd) return cmd_experiment(cfg, table);
    if (*lex_cmd) return cmd_lexicon_build(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NoProof& e) {
    std::cout << e.what() << "\n";
    return kNoProof;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kData;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
