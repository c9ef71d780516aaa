#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "readbench/cli.hpp"
#include "readbench/config.hpp"
#include "readbench/error.hpp"
#include "readbench/lexicon.hpp"
#include "readbench/stats.hpp"
#include "stub_server.hpp"

using namespace readbench;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), in, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "readbench_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
}

// Documents whose gold label is their word count.
void write_length_corpus(const fs::path& p, int n) {
  std::string lines;
  for (int i = 1; i <= n; ++i) {
    std::string text = "Word";
    for (int k = 1; k < i; ++k) text += " word";
    text += ".";
    nlohmann::json rec = {{"id", "d" + std::to_string(i)}, {"text", text}, {"label", i}};
    lines += rec.dump() + "\n";
  }
  write(p, lines);
}

std::string fkre_fixture() {
  std::string text;
  for (int s = 0; s < 5; ++s) {
    for (int i = 0; i < 10; ++i) text += (i == 0 ? "Cat " : "cat ");
    for (int i = 0; i < 10; ++i) text += i == 9 ? "water. " : "water ";
  }
  return text;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("score from stdin and arguments") {
    const auto r = run({"score"}, "The cat sat.");
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("# Words") != std::string::npos);
    const auto csv = run({"score", "--metrics", "words,sentences", "--format", "csv", "The cat sat. It ran."});
    CHECK(csv.code == kExitOk);
    CHECK(csv.out == "metric_id,value\nwords,5\nsentences,2\n");
  }

  TEST_CASE("score reproduces the fixture value") {
    const auto r = run({"score", "--metrics", "fkre"}, fkre_fixture());
    CHECK(r.code == kExitOk);
    CHECK(r.out.find(" 59.635\n") != std::string::npos);
    const auto csv = run({"score", "--metrics", "fkre", "--format", "csv"}, fkre_fixture());
    CHECK(std::stod(csv.out.substr(csv.out.find("fkre,") + 5)) == doctest::Approx(59.635).epsilon(1e-12));
  }

  TEST_CASE("score errors") {
    CHECK(run({"score"}, "").code == kExitData);
    CHECK(run({"score"}, "   \n").code == kExitData);
    CHECK(run({"score", "--metrics", "nope", "x"}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
  }

  TEST_CASE("input without words is a data error") {
    const auto r = run({"score", "--metrics", "fkre,words", "--format", "csv"}, "...");
    CHECK(r.code == kExitData);
  }

  TEST_CASE("bench writes reports with the config hash and seed") {
    const fs::path dir = fresh_dir("bench");
    write_length_corpus(dir / "toy.jsonl", 12);
    write(dir / "config.json", R"({"seed": 7, "out": "out",
      "metrics": ["words", "fkre", "smog"],
      "datasets": [{"name": "toy", "path": "toy.jsonl", "label_type": "continuous"}]})");
    const auto r = run({"--config", (dir / "config.json").string(), "bench"});
    CAPTURE(r.err);
    REQUIRE(r.code == kExitOk);
    const RunConfig cfg = load_run_config(dir / "config.json");
    const std::string tau = read_text_file(dir / "out" / "tau_matrix.csv");
    CHECK(tau.rfind("# config_sha256=" + cfg.hash() + "\n# seed=7\n", 0) == 0);
    const TauMatrix m = parse_tau_matrix_csv(tau);
    REQUIRE(m.metrics.front() == "words");
    CHECK(*m.at(0, 0) == doctest::Approx(1.0));
    for (const char* f : {"correlations.csv", "rank_table.csv", "corpus_summary.csv", "report.md"}) {
      CHECK(fs::exists(dir / "out" / f));
    }
    CHECK(read_text_file(dir / "out" / "report.md").find("# Words") != std::string::npos);

    const auto other = run({"--config", (dir / "config.json").string(), "--seed", "8", "--out",
                            (dir / "out8").string(), "bench"});
    REQUIRE(other.code == kExitOk);
    CHECK(read_text_file(dir / "out8" / "tau_matrix.csv").find("# seed=8\n") != std::string::npos);
    CHECK(load_run_config(dir / "config.json", {.seed = 8}).hash() != cfg.hash());
    CHECK(load_run_config(dir / "config.json", {.out_dir = "elsewhere"}).hash() == cfg.hash());
  }

  TEST_CASE("bench configuration errors") {
    const fs::path dir = fresh_dir("bench_errors");
    write(dir / "empty.json", R"({"datasets": []})");
    CHECK(run({"--config", (dir / "empty.json").string(), "bench"}).code == kExitUsage);
    write(dir / "typo.json", R"({"dataset": []})");
    CHECK(run({"--config", (dir / "typo.json").string(), "bench"}).code == kExitUsage);
    write(dir / "missing.json", R"({"datasets": [{"name": "x", "path": "nope.jsonl"}]})");
    CHECK(run({"--config", (dir / "missing.json").string(), "bench"}).code == kExitUsage);
    CHECK(run({"bench"}).code == kExitUsage);
  }

  TEST_CASE("judge failures exit with the upstream code") {
    testing::StubChatServer server([](std::size_t, const nlohmann::json&) { return testing::StubReply{503, ""}; });
    const fs::path dir = fresh_dir("judge");
    write_length_corpus(dir / "toy.jsonl", 3);
    nlohmann::json cfg = {
        {"out", "out"},
        {"datasets", {{{"name", "toy"}, {"path", "toy.jsonl"}, {"label_type", "continuous"}}}},
        {"judge",
         {{"base_url", server.base_url()}, {"model", "stub-model"}, {"variants", {"continuous-0-100"}},
          {"max_attempts", 1}, {"concurrency", 1}}}};
    write(dir / "config.json", cfg.dump());
    setenv(kApiKeyEnv, "test-key", 1);
    const auto r = run({"--config", (dir / "config.json").string(), "judge"});
    CHECK(r.code == kExitUpstream);
    CHECK(server.requests() == 3);
    const std::string csv = read_text_file(dir / "out" / "judgments_toy_continuous-0-100.csv");
    CHECK(csv.find("\nd1,,") != std::string::npos);
    const auto bench = run({"--config", (dir / "config.json").string(), "bench"});
    CHECK(bench.code == kExitUpstream);
    unsetenv(kApiKeyEnv);
  }

  TEST_CASE("rationales") {
    const fs::path dir = fresh_dir("rationales");
    std::string csv = "example_id,annotator_id,categories,label,rationale\n";
    for (int i = 0; i < 16; ++i) {
      const bool easy = i % 2 == 0;
      for (const char* a : {"a1", "a2"}) {
        csv += "e" + std::to_string(i) + "," + a + "," + (easy ? "examples" : "wording") + "," +
               (easy ? "Elementary" : "Graduate") + "," +
               (easy ? "simple everyday analogy" : "dense technical jargon") + "\n";
      }
    }
    write(dir / "ann.csv", csv);
    const auto r = run({"--out", (dir / "out").string(), "rationales", (dir / "ann.csv").string(), "--folds", "4",
                        "--C", "10", "--max-iter", "100", "--penalty", "l2", "--threads", "1"});
    CAPTURE(r.err);
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("jaccard agreement: 1.0000") != std::string::npos);
    for (const char* f : {"rationale_report.md", "category_counts.csv", "term_frequencies.csv", "grid_search.csv",
                          "top_features.csv"}) {
      CHECK(fs::exists(dir / "out" / f));
    }
    CHECK(read_text_file(dir / "out" / "top_features.csv").rfind("# config_sha256=", 0) == 0);
    write(dir / "bad.csv", "example_id,annotator_id,categories\ne1,a1,tone\n");
    CHECK(run({"--out", (dir / "out2").string(), "rationales", (dir / "bad.csv").string()}).code == kExitData);
  }

  TEST_CASE("stats subcommands") {
    const fs::path dir = fresh_dir("stats");
    write(dir / "pairs.csv", "x,y\n1,1\n2,2\n3,3\n4,5\n");
    const auto tau = run({"stats", "tau", (dir / "pairs.csv").string(), "--x", "x", "--y", "y"});
    CHECK(tau.code == kExitOk);
    CHECK(tau.out.rfind("tau_b=1\n", 0) == 0);
    write(dir / "tau.csv", "metric_id,a\nm1,0.9\nm2,-0.95\nm3,0.1\n");
    const auto rank = run({"stats", "rank", (dir / "tau.csv").string()});
    CHECK(rank.code == kExitOk);
    CHECK(rank.out.find("m2,1,1\n") != std::string::npos);
    write_length_corpus(dir / "toy.jsonl", 4);
    const auto corpus = run({"stats", "corpus", "--path", (dir / "toy.jsonl").string(), "--format", "csv"});
    CHECK(corpus.code == kExitOk);
    CHECK(corpus.out.find("2.5") != std::string::npos);
    write(dir / "const.csv", "x,y\n1,1\n2,1\n");
    CHECK(run({"stats", "tau", (dir / "const.csv").string(), "--x", "x", "--y", "y"}).code == kExitData);
  }
}
