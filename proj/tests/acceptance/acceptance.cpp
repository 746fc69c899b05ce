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


// Acceptance suite. `acceptance --criterion N` runs one criterion, no
// arguments runs all of them. Each prints a single PASS/FAIL line; the exit
// status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "autosynth/cli.hpp"
#include "autosynth/datasetgen.hpp"
#include "autosynth/evolution.hpp"
#include "autosynth/meshing.hpp"
#include "autosynth/policy.hpp"
#include "autosynth/surrogate.hpp"
#include "../unit/support.hpp"

using namespace autosynth;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double naive_chamfer(const PointCloud& x, const PointCloud& y) {
  auto one_way = [](const PointCloud& a, const PointCloud& b) {
    double sum = 0.0;
    for (const Vec3& p : a.points) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec3& q : b.points) best = std::min(best, (p - q).squaredNorm());
      sum += best;
    }
    return sum;
  };
  return (one_way(x, y) + one_way(y, x)) / (2.0 * static_cast<double>(x.size()));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Evaluator hamming_to(const Policy& hidden) {
  return [hidden](const Policy& p) {
    double d = 0;
    for (std::size_t i = 0; i < kPolicySize; ++i) d += p.labels[i] != hidden.labels[i];
    return d;
  };
}

Outcome c1() {
  const std::uint64_t n = search_space_size();
  std::uint64_t nine = 1;
  for (int i = 0; i < 11; ++i) nine *= 9;
  return {n == 31381059609ULL && n == nine, fmt("search_space_size() = %llu", (unsigned long long)n)};
}

Outcome c2() {
  Rng rng(derive_seed(2, "acceptance"));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng.index(128);
    const PointCloud p = test::random_cloud(rng, n), q = test::random_cloud(rng, n, 1.5);
    const double ref = naive_chamfer(p, q);
    worst = std::max({worst, std::abs(chamfer(p, q, ChamferMethod::kKdTree) - ref),
                      std::abs(chamfer(p, q, ChamferMethod::kAuto) - ref)});
  }
  return {worst <= 1e-9, fmt("max |kd-tree - brute force| = %.3g over 1000 pairs", worst)};
}

Outcome c3() {
  PointCloud x, y;
  x.points = {Vec3(0, 0, 0), Vec3(1, 0, 0)};
  y.points = {Vec3(0, 0, 0), Vec3(2, 0, 0)};
  const double c = chamfer(x, y);
  return {c == 0.5, fmt("chamfer = %.17g", c)};
}

Outcome c4() {
  const ModelShape shape{16, 4, {16, 32}, {32, 64}};
  Rng rng(derive_seed(4, "acceptance"));
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    AutoencoderParams p = AutoencoderParams::initialize(shape, rng.next_u64());
    const std::vector<PointCloud> batch = {test::random_cloud(rng, 16), test::random_cloud(rng, 16)};
    const LossAndGrad lg = loss_and_grad(p, batch);
    Eigen::VectorXd numeric(p.values.size());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < p.values.size(); ++i) {
      const double keep = p.values[i];
      p.values[i] = keep + h;
      const double up = loss_and_grad(p, batch).loss;
      p.values[i] = keep - h;
      const double down = loss_and_grad(p, batch).loss;
      p.values[i] = keep;
      numeric[i] = (up - down) / (2 * h);
    }
    worst = std::max(worst, (numeric - lg.grad).norm() / std::max(numeric.norm(), 1e-12));
  }
  return {worst < 1e-4, fmt("max relative gradient error %.3g at 20 parameter points (%zu params)", worst,
                            shape.parameter_count())};
}

Outcome c5() {
  const double bound = 1.5 * default_grid().cell_diagonal();
  Rng rng(derive_seed(5, "acceptance"));
  double worst = 0.0;
  std::size_t vertices = 0;
  for (int i = 0; i < 200; ++i) {
    const GeneratedObject obj = generate_object(to_ranges(random_policy(rng)), rng.next_u64());
    for (std::size_t c = 0; c < obj.spec.components.size(); ++c) {
      const SdfNode node = component_sdf(obj.spec.components[c]);
      for (std::size_t k = obj.component_offsets[c]; k < obj.component_offsets[c + 1]; ++k) {
        worst = std::max(worst, std::abs(eval_sdf(node, obj.to_raw(obj.mesh.vertices[k]))));
        ++vertices;
      }
    }
  }
  const double area = canonical_mesh(PrimitiveKind::kSphere).surface_area();
  const double area_err = std::abs(area / (4 * M_PI) - 1.0);
  return {worst <= bound && area_err <= 0.02,
          fmt("max |sdf| %.4g (bound %.4g) over %zu vertices; sphere area error %.3f%%", worst, bound,
              vertices, 100 * area_err)};
}

Outcome c6() {
  Rng rng(derive_seed(6, "acceptance"));
  std::size_t mismatches = 0;
  for (int comp = 0; comp < 20; ++comp) {
    std::vector<SdfNode> parts;
    std::vector<Plane> planes;
    std::vector<SdfNode> shapes;
    const std::size_t n = 1 + rng.index(4);
    for (std::size_t i = 0; i < n; ++i) {
      const PrimitiveKind kind = kAllPrimitiveKinds[rng.index(kNumPrimitiveKinds)];
      const SdfNode shape = SdfNode::transformed(SdfNode::primitive(canonical_primitive(kind)),
                                                 test::random_transform(rng));
      const Vec3 normal = rng.unit_vector();
      const Plane plane{normal * rng.uniform(-0.5, 0.5), normal};
      shapes.push_back(shape);
      planes.push_back(plane);
      parts.push_back(SdfNode::truncated(shape, plane));
    }
    const SdfNode whole = SdfNode::union_of(parts);
    for (int k = 0; k < 10000; ++k) {
      const Vec3 p(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
      double direct = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double cut = std::max(eval_sdf(shapes[i], p), planes[i].signed_distance(p));
        mismatches += eval_sdf(parts[i], p) != cut;
        direct = std::min(direct, cut);
      }
      mismatches += eval_sdf(whole, p) != direct;
    }
  }
  return {mismatches == 0, fmt("%zu mismatches over 20 compositions x 10000 probes", mismatches)};
}

Outcome c7() {
  Rng rng(derive_seed(7, "acceptance"));
  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const Policy p = random_policy(rng);
    const Policy c = mutate(p, rng);
    int d = 0;
    for (std::size_t k = 0; k < kPolicySize; ++k) d += p.labels[k] != c.labels[k];
    bad += d != 1 || c == p || !c.is_valid();
  }
  // Every Hamming-1 neighbour must be reachable, and nothing else.
  std::size_t min_children = SIZE_MAX, max_children = 0;
  for (int i = 0; i < 5; ++i) {
    const Policy p = random_policy(rng);
    std::set<Policy> children;
    for (int k = 0; k < 5000; ++k) children.insert(mutate(p, rng));
    min_children = std::min(min_children, children.size());
    max_children = std::max(max_children, children.size());
  }
  return {bad == 0 && min_children == 88 && max_children == 88,
          fmt("%zu contract violations in 10000 mutations; distinct children per policy %zu..%zu", bad,
              min_children, max_children)};
}

Outcome c8() {
  Rng noise(8);
  std::map<Policy, double> memo;
  const Evaluator eval = [&](const Policy& p) {
    auto it = memo.find(p);
    if (it == memo.end()) it = memo.emplace(p, std::floor(noise.uniform() * 20)).first;
    return it->second;
  };
  const std::size_t k = 16;
  SearchState s = init_population(SearchConfig{k, 1000, 8}, eval);
  std::size_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    double pool_max = -1;
    for (const auto& m : s.population) pool_max = std::max(pool_max, m.score);
    const StepReport r = evolution_step(s, eval);
    pool_max = std::max(pool_max, r.child_score);
    bad += s.population.size() != k || r.removed_score != pool_max;
  }
  return {bad == 0, fmt("%zu violations over 1000 steps (k=%zu)", bad, k)};
}

Outcome c9() {
  int hits = 0;
  std::string bests;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(seed, "hidden"));
    const SearchResult r = run_search(SearchConfig{16, 500, seed}, hamming_to(random_policy(rng)));
    hits += r.best.score == 0.0;
    bests += fmt("%s%g", seed ? "," : "", r.best.score);
  }
  return {hits >= 9, fmt("optimum reached in %d/10 runs (best distances %s; need 9)", hits, bests.c_str())};
}

RunConfig desk_config(std::uint64_t seed) {
  RunConfig c;
  c.seed = seed;
  c.population = 8;
  c.trials = 150;
  c.objects = 100;
  c.iterations = 1000;
  c.baseline_count = 20;
  return c;
}

Outcome c10() {
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    const RunConfig cfg = desk_config(seed);
    const auto target = std::make_shared<const Dataset>(load_target(cfg));
    const Evaluator eval = autosynth_evaluator(cfg.evaluator(), target);
    const SearchResult r = run_search(cfg.search(), eval);
    Rng rng(derive_seed(seed, "baseline"));
    std::vector<double> random_scores;
    for (std::size_t i = 0; i < cfg.baseline_count; ++i) random_scores.push_back(eval(random_policy(rng)));
    const double median = quantile(random_scores, 0.5);
    wins += r.best.score <= median;
    detail += fmt("%sseed %llu: search %.5g vs random median %.5g", detail.empty() ? "" : "; ",
                  (unsigned long long)seed, r.best.score, median);
    std::cerr << "criterion 10: " << detail << "\n";
  }
  return {wins >= 2, fmt("%d/3 runs (%s)", wins, detail.c_str())};
}

Outcome c11() {
  Policy policy;  // mid-range: every label 4
  policy.labels.fill(4);
  const std::vector<std::size_t> sizes = {4, 40, 400};
  std::vector<double> medians;
  for (std::size_t n : sizes) {
    std::vector<double> scores;
    for (std::uint64_t seed : {1, 2, 3}) {
      const Dataset train = generate_dataset(policy, n, 256, derive_seed(seed, "train-set"), {0, false});
      const Dataset held = generate_dataset(policy, 100, 256, derive_seed(seed, "held-out"), {0, false});
      TrainConfig tc;
      tc.iterations = 1000;
      tc.seed = derive_seed(seed, "train");
      scores.push_back(evaluate_fitness(train_surrogate(train, tc).params, held, 0));
    }
    std::sort(scores.begin(), scores.end());
    medians.push_back(scores[1]);
    std::cerr << "criterion 11: size " << n << " median " << scores[1] << "\n";
  }
  const bool trend = medians[1] <= medians[0] && medians[2] <= medians[1];
  return {trend, fmt("median held-out fitness %.5g (4) %.5g (40) %.5g (400)", medians[0], medians[1],
                     medians[2])};
}

std::vector<std::string> replay_args(const fs::path& out, int threads) {
  return {"search", "--quiet", "--seed", "12", "--population", "8", "--trials", "40", "--objects", "40",
          "--n-aug", "20", "--iterations", "200", "--output", out.string(), "--threads",
          std::to_string(threads)};
}

Outcome c12() {
  const fs::path dir = test::scratch_dir("acceptance_replay");
  std::ostringstream sink;
  std::vector<std::string> histories;
  for (int threads : {1, 3, 1}) {
    const fs::path out = dir / ("run" + std::to_string(histories.size()));
    if (run_cli(replay_args(out, threads), sink, sink) != kExitOk) return {false, "search failed: " + sink.str()};
    histories.push_back(slurp(out / "history.csv"));
  }
  const bool same = histories[0] == histories[1] && histories[1] == histories[2] && !histories[0].empty();
  return {same, fmt("history CSV (%zu bytes) %s across threads 1, 3, 1", histories[0].size(),
                    same ? "byte-identical" : "differs")};
}

Outcome c13() {
  const fs::path dir = test::scratch_dir("acceptance_roundtrip");
  std::vector<std::string> failures;
  const Dataset d = generate_dataset(full_range_policy(), 20, 256, 13, {0, true});
  if (!(import_dataset(export_dataset(d, dir / "obj_ply")) == d)) failures.push_back("dataset obj/ply");
  if (!(import_dataset(export_dataset(d, dir / "ply_xyz", {".ply", ".xyz"})) == d)) failures.push_back("dataset ply/xyz");

  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const Policy p = random_policy(rng);
    if (!(Policy::from_json(p.to_json()) == p)) {
      failures.push_back("policy json");
      break;
    }
  }
  const Policy p = random_policy(rng);
  write_policy(p, dir / "policy.json");
  if (!(read_policy(dir / "policy.json") == p)) failures.push_back("policy file");

  // Real evaluator, small scale: checkpoint after 4 trials, reload, finish.
  RunConfig cfg;
  cfg.seed = 13;
  cfg.population = 4;
  cfg.trials = 10;
  cfg.objects = 8;
  cfg.points = 64;
  cfg.n_aug = 8;
  cfg.iterations = 30;
  const auto target = std::make_shared<const Dataset>(load_target(cfg));
  const SearchResult whole = run_search(cfg.search(), autosynth_evaluator(cfg.evaluator(), target));
  SearchState part = init_population(cfg.search(), autosynth_evaluator(cfg.evaluator(), target));
  SearchConfig first = cfg.search();
  first.trials = 4;
  continue_search(part, first, autosynth_evaluator(cfg.evaluator(), target));
  save_checkpoint(part, dir / "checkpoint.json");
  SearchState resumed = load_checkpoint(dir / "checkpoint.json");
  continue_search(resumed, cfg.search(), autosynth_evaluator(cfg.evaluator(), target));
  if (history_csv(resumed.history) != history_csv(whole.history) || !(resumed == whole.state)) {
    failures.push_back("checkpoint resume");
  }
  std::string detail = "dataset, policy and checkpoint round trips";
  if (!failures.empty()) {
    detail = "failed:";
    for (const auto& f : failures) detail += " " + f;
  }
  return {failures.empty(), detail};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<const char*, std::function<Outcome()>>> table = {
      {1, {"search-space cardinality", c1}},   {2, {"chamfer oracle equivalence", c2}},
      {3, {"chamfer hand value", c3}},         {4, {"gradient check", c4}},
      {5, {"SDF/mesh consistency", c5}},       {6, {"composition semantics", c6}},
      {7, {"mutation contract", c7}},          {8, {"population invariant", c8}},
      {9, {"planted-optimum convergence", c9}}, {10, {"guidance beats random", c10}},
      {11, {"diversity trend", c11}},          {12, {"determinism replay", c12}},
      {13, {"round trips", c13}},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AutoSynth acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion,-c", selected, "Criterion number (1-13); repeatable. Default: all")
      ->check(CLI::Range(1, 13));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (const auto& [n, _] : criteria()) selected.push_back(n);
  }
  int failed = 0;
  for (int n : selected) {
    const auto& [name, run] = criteria().at(n);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s: %s (%s) [%.1f s]\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
