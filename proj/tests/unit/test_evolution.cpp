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


#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include "doctest.h"

#include "autosynth/errors.hpp"
#include "autosynth/evolution.hpp"
#include "autosynth/meshing.hpp"
#include "support.hpp"

using namespace autosynth;

namespace {

double label_sum(const Policy& p) {
  return std::accumulate(p.labels.begin(), p.labels.end(), 0.0);
}

Evaluator planted(const Policy& hidden) {
  return [hidden](const Policy& p) {
    double d = 0;
    for (std::size_t i = 0; i < kPolicySize; ++i) d += p.labels[i] != hidden.labels[i];
    return d;
  };
}

std::vector<double> pool_scores(const SearchState& s) {
  std::vector<double> v;
  for (const auto& m : s.population) v.push_back(m.score);
  return v;
}

EvaluatorConfig tiny_evaluator() {
  EvaluatorConfig c;
  c.objects = 8;
  c.points = 32;
  c.train.iterations = 20;
  c.train.latent = 8;
  c.train.encoder = {16, 32};
  c.train.decoder = {32, 64};
  c.seed = 5;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("init_population") {
  const SearchConfig cfg{2, 10, 3};
  const SearchState s = init_population(cfg, label_sum);
  REQUIRE(s.population.size() == 2);
  const double lo = std::min(s.population[0].score, s.population[1].score);
  CHECK(s.best.score == lo);
  CHECK(label_sum(s.best.policy) == lo);
  CHECK(s.trials_done == 0);
  CHECK(s.initial_scores == pool_scores(s));
  CHECK(init_population(cfg, label_sum) == s);
  CHECK_FALSE(init_population(SearchConfig{2, 10, 4}, label_sum) == s);
  CHECK_THROWS_AS(init_population(SearchConfig{1, 10, 3}, label_sum), InvalidArgument);
}

TEST_CASE("tournament: the lower score wins, ties go to the first draw") {
  SearchState s = init_population(SearchConfig{2, 10, 1}, label_sum);
  s.population[0].score = 0.5;  // A
  s.population[1].score = 0.3;  // B
  const auto child_is_worst = [](const Policy&) { return 10.0; };
  for (int i = 0; i < 20; ++i) {
    const auto before = s.population;
    const StepReport r = evolution_step(s, child_is_worst);
    CHECK(r.parent == 1);
    CHECK(r.first != r.second);
    // The child scored worse than everyone and was evicted.
    CHECK(r.removed == 2);
    CHECK(s.population == before);
  }
  s.population[0].score = s.population[1].score = 0.4;
  for (int i = 0; i < 20; ++i) {
    const StepReport r = evolution_step(s, child_is_worst);
    CHECK(r.parent == r.first);
  }
}

TEST_CASE("worst removal: ties evict the oldest") {
  SearchState s = init_population(SearchConfig{4, 10, 2}, [](const Policy&) { return 1.0; });
  for (int i = 0; i < 10; ++i) {
    const Policy oldest = s.population[0].policy;
    const std::size_t trial_of_second = s.population[1].trial;
    const StepReport r = evolution_step(s, [](const Policy&) { return 1.0; });
    CHECK(r.removed == 0);
    CHECK(s.population[0].trial == trial_of_second);
    CHECK(s.population.back().trial == s.trials_done);
    (void)oldest;
  }
}

TEST_CASE("pool invariants over many stub steps") {
  Rng noise(4);
  std::map<Policy, double> memo;
  const Evaluator eval = [&](const Policy& p) {
    auto it = memo.find(p);
    if (it == memo.end()) it = memo.emplace(p, noise.uniform()).first;
    return it->second;
  };
  SearchState s = init_population(SearchConfig{8, 10000, 9}, eval);
  double best = s.best.score;
  for (int i = 0; i < 10000; ++i) {
    const auto before = s.population;
    const StepReport r = evolution_step(s, eval);
    CHECK(s.population.size() == 8);
    CHECK(r.removed_score == r.pool_max);
    CHECK(before[r.parent].score <= before[r.first == r.parent ? r.second : r.first].score);
    double pool_max = r.child_score;
    for (const auto& m : before) pool_max = std::max(pool_max, m.score);
    CHECK(r.pool_max == pool_max);
    best = std::min(best, r.child_score);
    CHECK(s.best.score == best);
    CHECK(s.history.back().best_score == best);
  }
}

TEST_CASE("a failing evaluator leaves the state untouched") {
  SearchState s = init_population(SearchConfig{5, 10, 6}, label_sum);
  evolution_step(s, label_sum);
  const SearchState snapshot = s;
  const Evaluator broken = [](const Policy&) -> double { throw NonFinite("boom"); };
  try {
    evolution_step(s, broken);
    FAIL("expected EvaluationFailed");
  } catch (const EvaluationFailed& e) {
    CHECK(e.policy().is_valid());
    CHECK(std::string(e.what()).find(e.policy().digits()) != std::string::npos);
    CHECK_THROWS_AS(std::rethrow_exception(e.cause()), NonFinite);
  }
  CHECK(s == snapshot);
  CHECK_THROWS_AS(init_population(SearchConfig{5, 10, 6}, broken), EvaluationFailed);
}

TEST_CASE("planted optimum is found") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(seed, "hidden"));
    const SearchResult r = run_search(SearchConfig{16, 500, seed}, planted(random_policy(rng)));
    MESSAGE("seed " << seed << " best " << r.best.score);
    hits += r.best.score == 0.0;
    double prev = r.history.front().best_score;
    for (const auto& rec : r.history) {
      CHECK(rec.best_score <= prev);
      prev = rec.best_score;
    }
    CHECK(r.history.size() == 500);
  }
  CHECK(hits >= 9);
}

TEST_CASE("search beats the random-policy median") {
  int wins = 0;
  const int runs = 20;
  for (std::uint64_t seed = 0; seed < runs; ++seed) {
    Rng rng(derive_seed(seed, "hidden"));
    const Evaluator eval = planted(random_policy(rng));
    const SearchResult r = run_search(SearchConfig{16, 200, seed}, eval);
    std::vector<double> random_scores;
    for (int i = 0; i < 200; ++i) random_scores.push_back(eval(random_policy(rng)));
    wins += r.best.score <= quantile(random_scores, 0.5);
  }
  CHECK(wins >= 19);
}

TEST_CASE("best ever is reported even after it leaves the pool") {
  // The score of a policy is larger every time it is seen, so the early best
  // is eventually displaced.
  SearchState s = init_population(SearchConfig{3, 50, 2}, label_sum);
  double best = *std::min_element(s.initial_scores.begin(), s.initial_scores.end());
  const SearchResult r = run_search(SearchConfig{3, 50, 2}, label_sum);
  for (const auto& rec : r.history) best = std::min(best, rec.child_score);
  CHECK(r.best.score == best);
}

TEST_CASE("cache: each policy is evaluated once") {
  std::map<Policy, int> calls;
  EvaluationCache cache([&](const Policy& p) {
    ++calls[p];
    return label_sum(p);
  });
  const SearchResult r = run_search(SearchConfig{6, 400, 7}, [&](const Policy& p) { return cache(p); });
  for (const auto& [p, n] : calls) CHECK(n == 1);
  CHECK(cache.evaluations() == calls.size());
  CHECK(cache.evaluations() + cache.hits() == 6 + 400);
  CHECK(cache.hits() > 0);
}

TEST_CASE("replay and resume are bit-exact") {
  const SearchConfig cfg{8, 120, 21};
  const Evaluator eval = planted(Policy::from_index(42));
  const SearchResult a = run_search(cfg, eval);
  const SearchResult b = run_search(cfg, eval);
  CHECK(a.state == b.state);
  CHECK(history_csv(a.history) == history_csv(b.history));

  const auto dir = test::scratch_dir("evolution_resume");
  const auto ckpt = dir / "checkpoint.json";
  SearchState partial = init_population(cfg, eval);
  const SearchConfig first_half{8, 47, 21};
  continue_search(partial, first_half, eval);
  save_checkpoint(partial, ckpt);
  SearchState resumed = load_checkpoint(ckpt);
  CHECK(resumed == partial);
  continue_search(resumed, cfg, eval);
  CHECK(resumed == a.state);
  CHECK(history_csv(resumed.history) == history_csv(a.history));

  std::ofstream(dir / "broken.json") << "{\"version\": 1, \"seed\": 3}";
  CHECK_THROWS_AS(load_checkpoint(dir / "broken.json"), IoError);
  CHECK_THROWS_AS(load_checkpoint(dir / "absent.json"), IoError);
}

TEST_CASE("history CSV round trip and errors") {
  const auto dir = test::scratch_dir("evolution_history");
  const SearchResult r = run_search(SearchConfig{4, 30, 5}, label_sum);
  write_history_csv(r.history, dir / "h.csv");
  const auto rows = read_history_csv(dir / "h.csv");
  REQUIRE(rows.size() == 30);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].trial == i + 1);
    CHECK(rows[i].parent_hash == policy_hash(r.history[i].parent));
    CHECK(rows[i].child_labels == r.history[i].child.digits());
    CHECK(rows[i].child_score == r.history[i].child_score);
    CHECK(rows[i].best_score == r.history[i].best_score);
  }
  const std::string text = history_csv(r.history);
  CHECK(text.rfind("trial,parent_hash,child_labels,child_score,best_score\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 31);

  std::ofstream(dir / "bad.csv") << "trial,parent_hash,child_labels,child_score,best_score\n"
                                 << "1,abc,01234567801,0.5,0.5\n"
                                 << "2,abc,0123456780,0.5,0.5\n";
  try {
    read_history_csv(dir / "bad.csv");
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::ofstream(dir / "bad2.csv") << "trial,score\n";
  CHECK_THROWS_AS(read_history_csv(dir / "bad2.csv"), InvalidArgument);
}

TEST_CASE("report replays the pool exactly") {
  const auto dir = test::scratch_dir("evolution_report");
  const SearchConfig cfg{6, 80, 13};
  Rng noise(1);
  std::map<Policy, double> memo;
  const Evaluator eval = [&](const Policy& p) {
    auto it = memo.find(p);
    if (it == memo.end()) it = memo.emplace(p, noise.uniform()).first;
    return it->second;
  };
  SearchState s = init_population(cfg, eval);
  write_population_csv(s.population, dir / "init.csv");
  std::vector<std::vector<double>> actual;
  continue_search(s, cfg, eval, [&](const SearchState& st, const StepReport&) {
    std::vector<double> q;
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) q.push_back(quantile(pool_scores(st), f));
    actual.push_back(q);
  });
  write_history_csv(s.history, dir / "h.csv");
  const auto report = build_report(read_population_scores(dir / "init.csv"), read_history_csv(dir / "h.csv"));
  REQUIRE(report.size() == 80);
  for (std::size_t i = 0; i < report.size(); ++i) {
    CHECK(report[i].quantiles == actual[i]);
    if (i > 0) CHECK(report[i].best_score <= report[i - 1].best_score);
  }
  const std::string csv = report_csv(report);
  CHECK(csv.rfind("trial,best_score,pop_min,pop_q25,pop_median,pop_q75,pop_max\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 81);
  const auto bare = build_report({}, read_history_csv(dir / "h.csv"));
  CHECK(report_csv(bare).rfind("trial,best_score\n", 0) == 0);
}

TEST_CASE("quantile interpolates linearly") {
  CHECK(quantile({4, 1, 3, 2}, 0.5) == 2.5);
  CHECK(quantile({4, 1, 3, 2}, 0.0) == 1.0);
  CHECK(quantile({4, 1, 3, 2}, 1.0) == 4.0);
  CHECK(quantile({4, 1, 3, 2}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({7}, 0.3) == 7.0);
  CHECK_THROWS_AS(quantile({}, 0.5), InvalidArgument);
}

TEST_CASE("policy seeds follow policy content") {
  const Policy a = Policy::from_index(5), b = Policy::from_index(6);
  CHECK(policy_seed(1, a) == policy_seed(1, a));
  CHECK(policy_seed(1, a) != policy_seed(1, b));
  CHECK(policy_seed(1, a) != policy_seed(2, a));
}

TEST_CASE("autosynth evaluator: finite, cached, deterministic") {
  const EvaluatorConfig cfg = tiny_evaluator();
  auto target = std::make_shared<const Dataset>(
      build_target_dataset(canonical_mesh(PrimitiveKind::kSphere), 6, 32, 1));
  const Evaluator eval = autosynth_evaluator(cfg, target);
  Rng rng(3);
  for (int i = 0; i < 3; ++i) {
    const Policy p = random_policy(rng);
    const double s = eval(p);
    CHECK(std::isfinite(s));
    CHECK(s >= 0.0);
    CHECK(eval(p) == s);
    CHECK(evaluate_policy(cfg, *target, p).score == s);
  }
  const PolicyEvaluation e = evaluate_policy(cfg, *target, full_range_policy());
  CHECK_FALSE(e.generation_failed);
  CHECK(e.policy_seed == policy_seed(cfg.seed, full_range_policy()));
  CHECK(std::isfinite(e.final_train_loss));

  EvaluatorConfig wrong = cfg;
  wrong.points = 64;
  CHECK_THROWS_AS(evaluate_policy(wrong, *target, full_range_policy()), ShapeMismatch);
  CHECK_THROWS_AS(autosynth_evaluator(cfg, nullptr), InvalidArgument);
}

TEST_CASE("sphere target prefers a gentle policy over the full range") {
  EvaluatorConfig cfg;
  cfg.objects = 60;
  cfg.points = 128;
  cfg.train.iterations = 400;
  cfg.threads = 1;
  Policy gentle;  // all labels 0: two near-canonical primitives
  int wins = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    cfg.seed = seed;
    const Dataset target = build_target_dataset(canonical_mesh(PrimitiveKind::kSphere), 20, 128, seed);
    const double g = evaluate_policy(cfg, target, gentle).score;
    const double f = evaluate_policy(cfg, target, full_range_policy()).score;
    MESSAGE("seed " << seed << ": gentle " << g << " full-range " << f);
    wins += g < f;
  }
  CHECK(wins >= 2);
}

}  // TEST_SUITE
