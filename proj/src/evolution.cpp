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


#include "autosynth/evolution.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace autosynth {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double evaluate_or_throw(const Evaluator& evaluator, const Policy& policy) {
  try {
    return evaluator(policy);
  } catch (const EvaluationFailed&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationFailed(policy, std::current_exception(), e.what());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", score);
  return buf;
}

SearchState init_population(const SearchConfig& config, const Evaluator& evaluator) {
  if (!config.is_valid()) throw InvalidArgument("search config needs population >= 2 and trials >= 1");
  SearchState state;
  state.seed = config.seed;
  state.rng = Rng(derive_seed(config.seed, "search"));
  for (std::size_t i = 0; i < config.population; ++i) {
    ScoredPolicy member{random_policy(state.rng), 0.0, 0};
    member.score = evaluate_or_throw(evaluator, member.policy);
    state.initial_scores.push_back(member.score);
    if (i == 0 || member.score < state.best.score) state.best = member;
    state.population.push_back(member);
  }
  return state;
}

StepReport evolution_step(SearchState& state, const Evaluator& evaluator) {
  const std::size_t k = state.population.size();
  if (k < 2) throw InvalidArgument("evolution_step: population needs at least 2 members");
  Rng rng = state.rng;
  StepReport report;
  report.first = rng.index(k);
  report.second = rng.index(k - 1);
  if (report.second >= report.first) ++report.second;
  const ScoredPolicy& a = state.population[report.first];
  const ScoredPolicy& b = state.population[report.second];
  report.parent = b.score < a.score ? report.second : report.first;
  const Policy parent = state.population[report.parent].policy;
  const Policy child = mutate(parent, rng);
  report.child_score = evaluate_or_throw(evaluator, child);

  // Commit.
  const std::size_t trial = state.trials_done + 1;
  state.rng = rng;
  state.population.push_back({child, report.child_score, trial});
  report.removed = 0;
  for (std::size_t i = 1; i < state.population.size(); ++i) {
    if (state.population[i].score > state.population[report.removed].score) report.removed = i;
  }
  report.removed_score = state.population[report.removed].score;
  report.pool_max = report.removed_score;
  state.population.erase(state.population.begin() + static_cast<std::ptrdiff_t>(report.removed));
  state.trials_done = trial;
  if (report.child_score < state.best.score) state.best = {child, report.child_score, trial};
  state.history.push_back({trial, parent, child, report.child_score, state.best.score});
  return report;
}

void continue_search(SearchState& state, const SearchConfig& config, const Evaluator& evaluator,
                     const TrialCallback& on_trial) {
  if (!config.is_valid()) throw InvalidArgument("search config needs population >= 2 and trials >= 1");
  while (state.trials_done < config.trials) {
    const StepReport report = evolution_step(state, evaluator);
    if (on_trial) on_trial(state, report);
  }
}

SearchResult run_search(const SearchConfig& config, const Evaluator& evaluator,
                        const TrialCallback& on_trial) {
  SearchState state = init_population(config, evaluator);
  continue_search(state, config, evaluator, on_trial);
  return {state.best, state.history, std::move(state)};
}

double EvaluationCache::operator()(const Policy& policy) {
  if (auto it = scores_.find(policy); it != scores_.end()) {
    ++hits_;
    return it->second;
  }
  const double score = inner_(policy);
  scores_.emplace(policy, score);
  return score;
}

std::uint64_t policy_seed(std::uint64_t run_seed, const Policy& policy) {
  return derive_seed(run_seed, fnv1a64(policy.to_json()));
}

PolicyEvaluation evaluate_policy(const EvaluatorConfig& config, const Dataset& target,
                                 const Policy& policy) {
  if (target.entries.empty()) throw InvalidArgument("evaluate_policy: empty target dataset");
  for (const auto& e : target.entries) {
    if (e.cloud.size() != config.points) {
      throw ShapeMismatch("target clouds have " + std::to_string(e.cloud.size()) +
                          " points, evaluator expects " + std::to_string(config.points));
    }
  }
  PolicyEvaluation result;
  result.policy_seed = policy_seed(config.seed, policy);
  Dataset data;
  try {
    data = generate_dataset(policy, config.objects, config.points,
                            derive_seed(result.policy_seed, "data"), {config.threads, false});
  } catch (const RetryExhausted&) {
    result.generation_failed = true;
    return result;
  }
  TrainConfig train = config.train;
  train.seed = derive_seed(result.policy_seed, "train");
  const TrainResult trained = train_surrogate(data, train);
  result.final_train_loss = trained.losses.back();
  result.score = evaluate_fitness(trained.params, target, config.threads);
  if (!std::isfinite(result.score)) throw NonFinite("fitness is not finite");
  return result;
}

Evaluator autosynth_evaluator(const EvaluatorConfig& config, std::shared_ptr<const Dataset> target) {
  if (!target) throw InvalidArgument("autosynth_evaluator: no target dataset");
  auto cache = std::make_shared<EvaluationCache>(
      [config, target](const Policy& p) { return evaluate_policy(config, *target, p).score; });
  return [cache](const Policy& p) { return (*cache)(p); };
}

// --- History ---------------------------------------------------------------

std::string history_csv(const std::vector<TrialRecord>& history) {
  std::string out = "trial,parent_hash,child_labels,child_score,best_score\n";
  for (const auto& r : history) {
    out += std::to_string(r.trial) + ',' + policy_hash(r.parent) + ',' + r.child.digits() + ',' +
           format_score(r.child_score) + ',' + format_score(r.best_score) + '\n';
  }
  return out;
}

void write_history_csv(const std::vector<TrialRecord>& history, const fs::path& path) {
  write_text(path, history_csv(history));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_number(const std::string& s, double& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_count(const std::string& s, std::size_t& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::vector<HistoryRow> read_history_csv(const fs::path& path) {
  const auto lines = csv_lines(read_text(path));
  const auto fail = [&](std::size_t line, const std::string& what) {
    return InvalidArgument(path.string() + ": line " + std::to_string(line) + ": " + what);
  };
  if (lines.empty() || lines[0] != "trial,parent_hash,child_labels,child_score,best_score") {
    throw fail(1, "expected header 'trial,parent_hash,child_labels,child_score,best_score'");
  }
  std::vector<HistoryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 5) throw fail(i + 1, "expected 5 fields, got " + std::to_string(f.size()));
    HistoryRow r;
    if (!parse_count(f[0], r.trial)) throw fail(i + 1, "bad trial number '" + f[0] + "'");
    r.parent_hash = f[1];
    r.child_labels = f[2];
    if (r.child_labels.size() != kPolicySize ||
        !std::all_of(r.child_labels.begin(), r.child_labels.end(),
                     [](char c) { return c >= '0' && c <= '8'; })) {
      throw fail(i + 1, "child_labels must be 11 digits in 0-8");
    }
    if (!parse_number(f[3], r.child_score)) throw fail(i + 1, "bad child_score '" + f[3] + "'");
    if (!parse_number(f[4], r.best_score)) throw fail(i + 1, "bad best_score '" + f[4] + "'");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_population_csv(const std::vector<ScoredPolicy>& population, const fs::path& path) {
  std::string out = "index,labels,score\n";
  for (std::size_t i = 0; i < population.size(); ++i) {
    out += std::to_string(i) + ',' + population[i].policy.digits() + ',' +
           format_score(population[i].score) + '\n';
  }
  write_text(path, out);
}

std::vector<double> read_population_scores(const fs::path& path) {
  const auto lines = csv_lines(read_text(path));
  if (lines.empty() || lines[0] != "index,labels,score") {
    throw InvalidArgument(path.string() + ": line 1: expected header 'index,labels,score'");
  }
  std::vector<double> scores;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    double s = 0.0;
    if (f.size() != 3 || !parse_number(f[2], s)) {
      throw InvalidArgument(path.string() + ": line " + std::to_string(i + 1) + ": malformed row");
    }
    scores.push_back(s);
  }
  return scores;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<ReportRow> build_report(const std::vector<double>& initial_scores,
                                    const std::vector<HistoryRow>& history) {
  std::vector<ReportRow> rows;
  std::vector<double> pool = initial_scores;
  for (const auto& h : history) {
    ReportRow row{h.trial, h.best_score, {}};
    if (!pool.empty()) {
      pool.push_back(h.child_score);
      std::size_t worst = 0;
      for (std::size_t i = 1; i < pool.size(); ++i) {
        if (pool[i] > pool[worst]) worst = i;
      }
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(worst));
      for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) row.quantiles.push_back(quantile(pool, q));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  const bool with_pool = !rows.empty() && !rows.front().quantiles.empty();
  std::string out = with_pool ? "trial,best_score,pop_min,pop_q25,pop_median,pop_q75,pop_max\n"
                              : "trial,best_score\n";
  for (const auto& r : rows) {
    out += std::to_string(r.trial) + ',' + format_score(r.best_score);
    for (double q : r.quantiles) out += ',' + format_score(q);
    out += '\n';
  }
  return out;
}

// --- Checkpoints -----------------------------------------------------------

namespace {

json policy_json(const Policy& p) {
  json a = json::array();
  for (auto l : p.labels) a.push_back(static_cast<int>(l));
  return a;
}

Policy json_policy(const json& j) {
  if (!j.is_array() || j.size() != kPolicySize) throw InvalidArgument("policy needs 11 labels");
  Policy p;
  for (std::size_t i = 0; i < kPolicySize; ++i) {
    const int v = j[i].get<int>();
    if (v < 0 || v >= kNumLabels) throw InvalidArgument("policy label out of range");
    p.labels[i] = static_cast<std::uint8_t>(v);
  }
  return p;
}

json member_json(const ScoredPolicy& m) {
  return {{"labels", policy_json(m.policy)}, {"score", m.score}, {"trial", m.trial}};
}

ScoredPolicy json_member(const json& j) {
  return {json_policy(j.at("labels")), j.at("score").get<double>(), j.at("trial").get<std::size_t>()};
}

}  // namespace

void save_checkpoint(const SearchState& state, const fs::path& path) {
  json j;
  j["version"] = 1;
  j["seed"] = state.seed;
  j["trials_done"] = state.trials_done;
  j["rng"] = state.rng.serialize();
  j["best"] = member_json(state.best);
  j["population"] = json::array();
  for (const auto& m : state.population) j["population"].push_back(member_json(m));
  j["initial_scores"] = state.initial_scores;
  j["history"] = json::array();
  for (const auto& r : state.history) {
    j["history"].push_back({{"trial", r.trial},
                            {"parent", policy_json(r.parent)},
                            {"child", policy_json(r.child)},
                            {"child_score", r.child_score},
                            {"best_score", r.best_score}});
  }
  // Write then rename so an interrupted save never clobbers the last good one.
  const fs::path tmp = path.string() + ".tmp";
  write_text(tmp, j.dump() + "\n");
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into '" + path.string() + "': " + ec.message());
}

SearchState load_checkpoint(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    const json j = json::parse(text);
    if (j.at("version").get<int>() != 1) throw InvalidArgument("unsupported checkpoint version");
    SearchState s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.trials_done = j.at("trials_done").get<std::size_t>();
    s.rng = Rng::deserialize(j.at("rng").get<std::string>());
    s.best = json_member(j.at("best"));
    for (const auto& m : j.at("population")) s.population.push_back(json_member(m));
    s.initial_scores = j.at("initial_scores").get<std::vector<double>>();
    for (const auto& r : j.at("history")) {
      s.history.push_back({r.at("trial").get<std::size_t>(), json_policy(r.at("parent")),
                           json_policy(r.at("child")), r.at("child_score").get<double>(),
                           r.at("best_score").get<double>()});
    }
    if (s.history.size() != s.trials_done) throw InvalidArgument("history length != trials_done");
    return s;
  } catch (const json::exception& e) {
    throw IoError("malformed checkpoint '" + path.string() + "': " + e.what());
  } catch (const InvalidArgument& e) {
    throw IoError("malformed checkpoint '" + path.string() + "': " + e.what());
  }
}

}  // namespace autosynth
