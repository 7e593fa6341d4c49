#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support/oracles.hpp"

#include "json.hpp"
#include "lstar/experiment.hpp"
#include "lstar/tensor.hpp"

using namespace lstar;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kBin = LSTAR_BIN;
const std::string kData = LSTAR_DATA;

std::string q(const std::string& s) { return "'" + s + "'"; }

oracle::RunResult lstar_run(const std::string& args) { return oracle::run(q(kBin) + " " + args + " 2>/dev/null"); }

fs::path scratch() {
  fs::path p = fs::temp_directory_path() / ("lstar_cli_" + std::to_string(getpid()));
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string synthetic(const std::string& dataset) {
  std::string s = kData + "/synthetic/";
  return "--dataset " + q(s + dataset) + " --embeddings " + q(s + "embeddings.txt") + " --triples " +
         q(s + "triples.tsv");
}

std::size_t occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("prove exit codes") {
  auto ok = lstar_run("prove " + q(oracle::kSentence));
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["rule"] == "OverL");
  auto none = lstar_run("prove 'A => B'");
  CHECK(none.code == 1);
  CHECK(none.out.find("no proof under budget") != std::string::npos);
  CHECK(lstar_run("prove '(('").code == 2);
  CHECK(lstar_run("prove").code == 2);
  CHECK(lstar_run("frobnicate").code == 2);
  CHECK(lstar_run("prove " + q(oracle::kParasitic) + " --max-contractions 0").code == 1);
  CHECK(lstar_run("prove 'A => A' --format text").out.find("(Axiom)") != std::string::npos);
}

TEST_CASE("compile") {
  auto gap = lstar_run("compile " + q(oracle::kParasitic));
  REQUIRE(gap.code == 0);
  CHECK(occurrences(gap.out, "\"op\": \"CopyDelta\"") == 1);
  auto ax = lstar_run("compile 'A => A'");
  REQUIRE(ax.code == 0);
  CHECK(json::parse(ax.out)["term"]["op"] == "Id");
  CHECK(lstar_run("compile 'A => B'").code == 1);

  fs::path dir = scratch();
  fs::path dot = dir / "sentence.dot", tree = dir / "tree.dot";
  auto r = lstar_run("compile " + q(oracle::kSentence) + " --dot " + q(dot.string()) + " --tree-dot " +
                     q(tree.string()));
  REQUIRE(r.code == 0);
  std::string err;
  CHECK_MESSAGE(oracle::dot_well_formed(slurp(dot), &err), err);
  CHECK_MESSAGE(oracle::dot_well_formed(slurp(tree), &err), err);
  fs::remove_all(dir);
}

TEST_CASE("eval on the toy lexicon") {
  std::string lex = kData + "/toy/lexicon.json";
  auto r = lstar_run("eval 'John signed the papers' --lexicon " + q(lex) + " --format text");
  REQUIRE(r.code == 0);
  Tensor got = parse_tensor(r.out);
  std::string toy = kData + "/toy/";
  Tensor want = oracle::sentence_value(load_tensor(toy + "john.txt"), load_tensor(toy + "signed.txt"),
                                       load_tensor(toy + "the.txt"), load_tensor(toy + "papers.txt"));
  CHECK(got.shape() == std::vector<std::size_t>{2});
  CHECK(max_abs_diff(got, want) <= 1e-12);
  CHECK(lstar_run("eval 'John signed the memo' --lexicon " + q(lex)).code == 3);
  CHECK(lstar_run("eval 'John signed the papers'").code == 2);
  CHECK(lstar_run("eval 'John signed the papers' --lexicon " + q(lex) + " --mode nonsense").code == 2);
  CHECK(lstar_run("eval 'John signed the papers' --lexicon " + q(lex) + " --goal NP").code == 1);
}

TEST_CASE("eval of a parasitic gap phrase with full copying") {
  fs::path dir = scratch();
  fs::path lex = dir / "pgap.json";
  REQUIRE(lstar_run("lexicon-build " + synthetic("dataset.tsv") + " --out " + q(lex.string())).code == 0);
  auto r = lstar_run("eval 'noun05 noun20 verb00 without helper00' --pgap --mode full --lexicon " + q(lex.string()));
  REQUIRE(r.code == 0);
  json out = json::parse(r.out);
  Tensor got(out["shape"].get<std::vector<std::size_t>>(), out["data"].get<std::vector<double>>());
  json entries = json::parse(slurp(lex));
  auto t = [&](const char* w) {
    return Tensor(entries[w]["shape"].get<std::vector<std::size_t>>(), entries[w]["data"].get<std::vector<double>>());
  };
  Tensor want = oracle::pgap_formula("full", t("noun05"), t("noun20"), t("verb00"), t("helper00"), 1.0);
  CHECK(max_abs_diff(got, want) <= 1e-10);
  fs::remove_all(dir);
}

TEST_CASE("experiment") {
  auto all = lstar_run("experiment " + synthetic("dataset.tsv"));
  REQUIRE(all.code == 0);
  json rep = json::parse(all.out);
  REQUIRE(rep["modes"].size() >= 4);
  for (const auto& m : rep["modes"]) {
    CHECK(m["accuracy"].get<double>() >= 0.0);
    CHECK(m["accuracy"].get<double>() <= 1.0);
  }
  auto full = json::parse(lstar_run("experiment --mode full " + synthetic("dataset.tsv")).out);
  CHECK(full["modes"][0]["accuracy"] == 1.0);
  auto inv = json::parse(lstar_run("experiment --mode full " + synthetic("dataset_inverted.tsv")).out);
  CHECK(inv["modes"][0]["accuracy"] == 0.0);
  CHECK(lstar_run("experiment " + synthetic("empty.tsv")).code == 3);
  CHECK(lstar_run("experiment " + synthetic("missing.tsv")).code == 3);
  CHECK(lstar_run("experiment --mode fock " + synthetic("dataset.tsv")).code == 2);
  auto text = lstar_run("experiment --format text --mode cogebra-a,full " + synthetic("dataset.tsv"));
  CHECK(text.out.find("cogebra-a") != std::string::npos);
  CHECK(text.out.find("Accuracy") != std::string::npos);
}

TEST_CASE("config file and precedence") {
  fs::path dir = scratch();
  fs::path cfg = dir / "run.ini";
  std::ofstream(cfg) << "format = text\nmax-contractions = 0\n";
  auto r = lstar_run("--config " + q(cfg.string()) + " prove " + q(oracle::kSentence));
  CHECK(r.code == 0);
  CHECK(r.out.find("(Axiom)") != std::string::npos);
  CHECK(lstar_run("--config " + q(cfg.string()) + " prove " + q(oracle::kParasitic)).code == 1);
  CHECK(lstar_run("--config " + q(cfg.string()) + " prove " + q(oracle::kParasitic) + " --max-contractions 1").code ==
        0);
  fs::remove_all(dir);
}

TEST_CASE("repeated runs are byte identical") {
  std::string lex = kData + "/toy/lexicon.json";
  for (const std::string& cmd :
       {"prove " + q(oracle::kParasitic), "compile " + q(oracle::kParasitic),
        "eval 'John signed the papers' --lexicon " + q(lex), "experiment " + synthetic("dataset.tsv"),
        "lexicon-build " + synthetic("dataset.tsv")}) {
    auto a = lstar_run(cmd), b = lstar_run(cmd);
    CAPTURE(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}
