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


#ifndef AUTOSYNTH_CLI_HPP_
#define AUTOSYNTH_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "autosynth/errors.hpp"
#include "autosynth/evolution.hpp"

namespace autosynth {

// Bad config file or flag value. Maps to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumeric = 4;

inline constexpr const char* kDemoTarget = "builtin:demo";

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t population = 32;
  std::size_t trials = 1000;
  std::size_t objects = kDefaultObjectCount;
  std::size_t points = kDefaultPointsPerCloud;
  std::size_t n_aug = kDefaultTargetAugmentations;
  std::size_t iterations = 2000;
  std::size_t batch = 8;
  double learning_rate = 1e-3;
  std::size_t latent = 64;
  std::string precision = "float32";  // or float64
  std::size_t baseline_count = 20;
  std::string target = kDemoTarget;  // OBJ/PLY path or builtin:demo
  std::filesystem::path output = "autosynth_out";
  int threads = 0;

  // Throws ConfigError naming the offending field.
  void validate() const;
  SearchConfig search() const;
  EvaluatorConfig evaluator() const;
};

// Reads a JSON object whose keys are the RunConfig field names. Unknown keys
// and type errors raise ConfigError with the line they appear on.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<config>");
std::string run_config_json(const RunConfig& config);

// builtin:demo or a mesh file, normalized and augmented per the config.
Dataset load_target(const RunConfig& config);

// Entry point of the autosynth tool; returns the process exit status.
int run_cli(int argc, const char* const* argv);
// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace autosynth

#endif  // AUTOSYNTH_CLI_HPP_
