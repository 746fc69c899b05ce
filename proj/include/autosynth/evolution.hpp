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


// Mutation-only evolutionary search with tournament selection over policies,
// plus the evaluator that scores a policy by training the surrogate on its
// synthetic dataset.

#ifndef AUTOSYNTH_EVOLUTION_HPP_
#define AUTOSYNTH_EVOLUTION_HPP_

#include <cfloat>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "autosynth/datasetgen.hpp"
#include "autosynth/errors.hpp"
#include "autosynth/policy.hpp"
#include "autosynth/rng.hpp"
#include "autosynth/surrogate.hpp"

namespace autosynth {

// Lower is better.
using Evaluator = std::function<double(const Policy&)>;

// Score given to policies whose dataset cannot be generated.
inline constexpr double kWorstScore = DBL_MAX;

// An evaluator failure, tagged with the policy being evaluated. cause()
// holds the original exception.
class EvaluationFailed : public Error {
 public:
  EvaluationFailed(const Policy& policy, std::exception_ptr cause, const std::string& what)
      : Error("evaluating policy " + policy.digits() + ": " + what),
        policy_(policy),
        cause_(std::move(cause)) {}
  const Policy& policy() const { return policy_; }
  std::exception_ptr cause() const { return cause_; }

 private:
  Policy policy_;
  std::exception_ptr cause_;
};

struct ScoredPolicy {
  Policy policy;
  double score = 0.0;
  std::size_t trial = 0;  // 0 for the initial population

  bool operator==(const ScoredPolicy&) const = default;
};

struct TrialRecord {
  std::size_t trial = 0;  // 1-based
  Policy parent;
  Policy child;
  double child_score = 0.0;
  double best_score = 0.0;  // best ever, after this trial

  bool operator==(const TrialRecord&) const = default;
};

struct SearchConfig {
  std::size_t population = 32;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;

  bool is_valid() const { return population >= 2 && trials >= 1; }
};

struct SearchState {
  std::vector<ScoredPolicy> population;  // oldest first
  std::vector<double> initial_scores;
  std::size_t trials_done = 0;
  ScoredPolicy best;
  std::uint64_t seed = 0;
  Rng rng{0};
  std::vector<TrialRecord> history;

  bool operator==(const SearchState& o) const {
    return population == o.population && initial_scores == o.initial_scores &&
           trials_done == o.trials_done && best == o.best && seed == o.seed &&
           rng.serialize() == o.rng.serialize() && history == o.history;
  }
};

// k random policies, each evaluated once.
SearchState init_population(const SearchConfig& config, const Evaluator& evaluator);

struct StepReport {
  std::size_t first = 0, second = 0;  // tournament draws, positions in the pool
  std::size_t parent = 0;             // position of the winner
  double child_score = 0.0;
  std::size_t removed = 0;            // position in the enlarged pool
  double removed_score = 0.0;
  double pool_max = 0.0;              // max score of the enlarged pool
};

// One tournament: two distinct members drawn uniformly, the lower score is
// the parent (first draw on ties), its mutation is evaluated and appended,
// and the worst member of the enlarged pool is removed (oldest on ties).
// The state is left untouched if the evaluator throws.
StepReport evolution_step(SearchState& state, const Evaluator& evaluator);

using TrialCallback = std::function<void(const SearchState&, const StepReport&)>;

// Continues until config.trials steps are done; partial progress stays in
// state if the evaluator throws.
void continue_search(SearchState& state, const SearchConfig& config, const Evaluator& evaluator,
                     const TrialCallback& on_trial = {});

struct SearchResult {
  ScoredPolicy best;
  std::vector<TrialRecord> history;
  SearchState state;
};

SearchResult run_search(const SearchConfig& config, const Evaluator& evaluator,
                        const TrialCallback& on_trial = {});

// Memoizes an evaluator so every policy value is evaluated at most once.
class EvaluationCache {
 public:
  explicit EvaluationCache(Evaluator inner) : inner_(std::move(inner)) {}
  double operator()(const Policy& policy);
  std::size_t evaluations() const { return scores_.size(); }
  std::size_t hits() const { return hits_; }

 private:
  Evaluator inner_;
  std::map<Policy, double> scores_;
  std::size_t hits_ = 0;
};

struct EvaluatorConfig {
  std::size_t objects = kDefaultObjectCount;
  std::size_t points = kDefaultPointsPerCloud;
  TrainConfig train;  // train.seed is replaced per policy
  std::uint64_t seed = 0;
  int threads = 0;
};

struct PolicyEvaluation {
  double score = kWorstScore;
  bool generation_failed = false;
  std::uint64_t policy_seed = 0;
  double final_train_loss = 0.0;
};

// Seed of a policy's dataset and training run: derived from the run seed and
// the policy's canonical JSON bytes.
std::uint64_t policy_seed(std::uint64_t run_seed, const Policy& policy);

// generate_dataset -> train_surrogate -> evaluate_fitness on target.
// RetryExhausted yields kWorstScore. Uncached.
PolicyEvaluation evaluate_policy(const EvaluatorConfig& config, const Dataset& target,
                                 const Policy& policy);

// Cached evaluate_policy(...).score. The target is shared, not copied.
Evaluator autosynth_evaluator(const EvaluatorConfig& config,
                              std::shared_ptr<const Dataset> target);

// --- Files -----------------------------------------------------------------

// trial,parent_hash,child_labels,child_score,best_score
void write_history_csv(const std::vector<TrialRecord>& history, const std::filesystem::path& path);
std::string history_csv(const std::vector<TrialRecord>& history);

struct HistoryRow {
  std::size_t trial = 0;
  std::string parent_hash;
  std::string child_labels;
  double child_score = 0.0;
  double best_score = 0.0;
};
// Throws InvalidArgument naming the offending line.
std::vector<HistoryRow> read_history_csv(const std::filesystem::path& path);

// index,labels,score
void write_population_csv(const std::vector<ScoredPolicy>& population,
                          const std::filesystem::path& path);
std::vector<double> read_population_scores(const std::filesystem::path& path);

struct ReportRow {
  std::size_t trial = 0;
  double best_score = 0.0;
  // Pool quantiles after the trial; empty when the initial pool is unknown.
  std::vector<double> quantiles;  // min, q25, median, q75, max
};

// Replays pool membership from scores alone (append child, drop the worst,
// oldest on ties).
std::vector<ReportRow> build_report(const std::vector<double>& initial_scores,
                                    const std::vector<HistoryRow>& history);
std::string report_csv(const std::vector<ReportRow>& rows);

// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

void save_checkpoint(const SearchState& state, const std::filesystem::path& path);
SearchState load_checkpoint(const std::filesystem::path& path);

std::string format_score(double score);  // %.17g

}  // namespace autosynth

#endif  // AUTOSYNTH_EVOLUTION_HPP_
