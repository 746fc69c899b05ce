// Copyright 2026 The AutoSynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "autosynth/cli.hpp"
#include "autosynth/mesh_io.hpp"
#include "support.hpp"

using namespace autosynth;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_ext(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

// Small enough that a 50-trial search takes a few seconds.
std::vector<std::string> tiny(const fs::path& out) {
  return {"--objects", "4",  "--points",     "32", "--n-aug", "4",          "--iterations",
          "10",        "--latent", "8",     "--batch", "4",  "--output",  out.string(), "--threads", "1"};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
  const Run help = cli({"--help"});
  CHECK(help.status == kExitOk);
  CHECK(help.out.find("search") != std::string::npos);
  const Run search_help = cli({"search", "--help"});
  CHECK(search_help.status == kExitOk);
  CHECK(search_help.out.find("--population") != std::string::npos);
  CHECK(search_help.out.find("32") != std::string::npos);
  CHECK(cli({}).status == kExitUsage);
  CHECK(cli({"frobnicate"}).status == kExitUsage);
  CHECK(cli({"search", "--population", "banana"}).status == kExitUsage);
}

TEST_CASE("gen writes the dataset") {
  const auto dir = test::scratch_dir("cli_gen");
  const auto args = std::vector<std::string>{"gen", "--policy", "full-range", "-n", "10", "-v",
                                             "64", "--seed", "3", "--out", (dir / "a").string()};
  const Run r = cli(args);
  REQUIRE(r.status == kExitOk);
  CHECK(count_ext(dir / "a", ".obj") == 10);
  CHECK(count_ext(dir / "a", ".ply") == 10);
  CHECK(fs::exists(dir / "a" / "manifest.json"));
  CHECK(r.out.find("manifest.json") != std::string::npos);
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    if (e.path().extension() == ".ply") CHECK(read_cloud(e.path()).size() == 64);
  }

  auto again = args;
  again.back() = (dir / "b").string();
  REQUIRE(cli(again).status == kExitOk);
  CHECK(slurp(dir / "a" / "manifest.json") == slurp(dir / "b" / "manifest.json"));

  auto none = args;
  none[4] = "0";
  CHECK(cli(none).status == kExitUsage);

  const Run pairs = cli({"gen", "--policy", "full-range", "-n", "3", "-v", "64", "--pairs",
                         "--out", (dir / "p").string()});
  REQUIRE(pairs.status == kExitOk);
  CHECK(fs::exists(dir / "p" / "pair_00002_target.ply"));
  const auto gt = nlohmann::json::parse(slurp(dir / "p" / "pairs.json"));
  CHECK(gt.size() == 3);

  std::ofstream(dir / "policy.json") << full_range_policy().to_json();
  CHECK(cli({"gen", "--policy", (dir / "policy.json").string(), "-n", "2", "--out",
             (dir / "f").string()}).status == kExitOk);
  CHECK(cli({"gen", "--policy", (dir / "missing.json").string(), "--out", (dir / "g").string()})
            .status == kExitIo);
}

TEST_CASE("search, report, eval and baseline") {
  const auto dir = test::scratch_dir("cli_search");
  const auto run_a = dir / "a";
  const Run r = cli(concat({"search", "--quiet", "--trials", "50", "--population", "8", "--seed", "4"},
                           tiny(run_a)));
  REQUIRE(r.status == kExitOk);
  const auto rows = read_history_csv(run_a / "history.csv");
  CHECK(rows.size() == 50);
  for (const char* f : {"best_policy.json", "summary.json", "config.json", "checkpoint.json",
                        "initial_population.csv"}) {
    CHECK(fs::exists(run_a / f));
  }
  const auto summary = nlohmann::json::parse(slurp(run_a / "summary.json"));
  CHECK(summary["trials"] == 50);
  CHECK(summary["population"] == 8);
  CHECK(summary["best_score"].get<double>() == rows.back().best_score);
  CHECK(r.out.rfind("best ", 0) == 0);

  // Same config and seed: byte-identical history.
  const auto run_b = dir / "b";
  REQUIRE(cli(concat({"search", "--quiet", "--trials", "50", "--population", "8", "--seed", "4"},
                     tiny(run_b))).status == kExitOk);
  CHECK(slurp(run_a / "history.csv") == slurp(run_b / "history.csv"));

  // Report: one row per trial, monotone best.
  const Run rep = cli({"report", "--history", (run_a / "history.csv").string(), "--out",
                       (dir / "report.csv").string()});
  REQUIRE(rep.status == kExitOk);
  std::istringstream report(slurp(dir / "report.csv"));
  std::string line;
  std::getline(report, line);
  CHECK(line == "trial,best_score,pop_min,pop_q25,pop_median,pop_q75,pop_max");
  std::size_t n = 0;
  double prev = 1e300;
  while (std::getline(report, line)) {
    ++n;
    const auto a = line.find(','), b = line.find(',', a + 1);
    const double best = std::stod(line.substr(a + 1, b - a - 1));
    CHECK(best <= prev);
    prev = best;
  }
  CHECK(n == 50);
  CHECK(cli({"report", "--history", (run_a / "history.csv").string()}).out == slurp(dir / "report.csv"));

  std::ofstream(dir / "bad.csv") << "trial,parent_hash,child_labels,child_score,best_score\n1,x,12,nan\n";
  const Run bad = cli({"report", "--history", (dir / "bad.csv").string()});
  CHECK(bad.status == kExitUsage);
  CHECK(bad.err.find("line 2") != std::string::npos);
  CHECK(cli({"report", "--history", (dir / "nope.csv").string()}).status == kExitIo);

  // eval reproduces the score recorded in the search history.
  const auto& row = rows.back();
  Policy child;
  for (std::size_t i = 0; i < kPolicySize; ++i) child.labels[i] = row.child_labels[i] - '0';
  std::ofstream(dir / "child.json") << child.to_json();
  const Run ev = cli(concat({"eval", "--policy", (dir / "child.json").string(), "--seed", "4"},
                            tiny(dir / "eval")));
  REQUIRE(ev.status == kExitOk);
  char expect[64];
  std::snprintf(expect, sizeof expect, "%.6g\n", row.child_score);
  CHECK(ev.out == expect);
  const auto record = nlohmann::json::parse(slurp(dir / "eval" / ("eval_" + child.digits() + ".json")));
  CHECK(record["score"].get<double>() == row.child_score);

  const Run base = cli(concat({"baseline", "--mode", "random", "--count", "3"}, tiny(dir / "base")));
  REQUIRE(base.status == kExitOk);
  std::istringstream lines(base.out);
  std::vector<std::string> out;
  while (std::getline(lines, line)) out.push_back(line);
  REQUIRE(out.size() == 5);
  for (int i = 0; i < 3; ++i) {
    CHECK(out[i].size() > 12);
    CHECK(out[i][11] == ' ');
  }
  CHECK(out[3].rfind("min ", 0) == 0);
  CHECK(out[4].rfind("median ", 0) == 0);
  CHECK(fs::exists(dir / "base" / "baseline_random.csv"));
  const Run full = cli(concat({"baseline", "--mode", "full-range"}, tiny(dir / "base")));
  REQUIRE(full.status == kExitOk);
  CHECK(full.out.rfind(full_range_policy().digits() + " ", 0) == 0);
}

TEST_CASE("resume continues where the checkpoint stopped") {
  const auto dir = test::scratch_dir("cli_resume");
  const auto base = std::vector<std::string>{"search", "--quiet", "--population", "4", "--seed", "9"};
  REQUIRE(cli(concat(concat(base, {"--trials", "6"}), tiny(dir / "whole"))).status == kExitOk);
  REQUIRE(cli(concat(concat(base, {"--trials", "3"}), tiny(dir / "split"))).status == kExitOk);
  REQUIRE(cli(concat(concat(base, {"--trials", "6", "--resume"}), tiny(dir / "split"))).status == kExitOk);
  CHECK(slurp(dir / "whole" / "history.csv") == slurp(dir / "split" / "history.csv"));
  CHECK(cli(concat({"search", "--quiet", "--population", "5", "--seed", "9", "--trials", "8", "--resume"},
                   tiny(dir / "split"))).status == kExitUsage);
}

TEST_CASE("config files") {
  const auto dir = test::scratch_dir("cli_config");
  const RunConfig defaults;
  CHECK(defaults.population == 32);
  CHECK(defaults.trials == 1000);
  CHECK(defaults.n_aug == 100);
  CHECK(defaults.learning_rate == 1e-3);
  CHECK(defaults.batch == 8);
  CHECK(defaults.search().population == 32);
  CHECK(defaults.search().trials == 1000);

  RunConfig c;
  c.seed = 77;
  c.trials = 5;
  c.target = "builtin:demo";
  CHECK(parse_run_config(run_config_json(c)).seed == 77);
  CHECK(parse_run_config(run_config_json(c)).trials == 5);

  try {
    parse_run_config("{\n  \"seed\": 1,\n  \"trails\": 5\n}\n", "run.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.json:3") != std::string::npos);
    CHECK(std::string(e.what()).find("trails") != std::string::npos);
  }
  try {
    parse_run_config("{\n  \"seed\": 1,\n  \"population\": -3\n}\n", "run.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.json:3") != std::string::npos);
  }
  try {
    parse_run_config("{\n  \"seed\": 1,\n\n  \"population\" 3\n}\n", "run.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.json:4") != std::string::npos);
  }

  std::ofstream(dir / "bad.json") << "{\n  \"population\": 1\n}\n";
  const Run bad = cli({"search", "--config", (dir / "bad.json").string()});
  CHECK(bad.status == kExitUsage);
  CHECK(bad.err.find("population") != std::string::npos);

  std::ofstream(dir / "ok.json") << "{\n  \"population\": 4,\n  \"trials\": 2,\n  \"target\": \""
                                 << (dir / "missing.obj").generic_string() << "\"\n}\n";
  CHECK(cli({"search", "--config", (dir / "ok.json").string()}).status == kExitUsage);
  CHECK(cli({"search", "--config", (dir / "absent.json").string()}).status == kExitIo);

  // A flag overrides the file; the resolved config is echoed to config.json.
  write_mesh(demo_target_mesh(), dir / "target.obj");
  std::ofstream(dir / "run.json") << "{\n  \"population\": 4,\n  \"trials\": 2,\n  \"target\": \""
                                  << (dir / "target.obj").generic_string() << "\"\n}\n";
  REQUIRE(cli(concat({"search", "--quiet", "--config", (dir / "run.json").string(), "--trials", "3"},
                     tiny(dir / "out"))).status == kExitOk);
  const RunConfig echoed = load_run_config(dir / "out" / "config.json");
  CHECK(echoed.population == 4);
  CHECK(echoed.trials == 3);
  CHECK(read_history_csv(dir / "out" / "history.csv").size() == 3);

  // Output path that is a regular file: I/O error.
  std::ofstream(dir / "blocker") << "x";
  CHECK(cli(concat({"search", "--quiet", "--population", "2", "--trials", "1"}, tiny(dir / "blocker")))
            .status == kExitIo);
}

}  // TEST_SUITE
