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

#ifndef AUTOSYNTH_RNG_HPP_
#define AUTOSYNTH_RNG_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace autosynth {

// Seeded random stream. The engine is std::mt19937_64; the distributions are
// implemented here so that every draw is reproducible across standard
// libraries (std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n);

  // Standard normal via Box-Muller (no cached second value, so the state is
  // exactly the engine state).
  double normal();

  // Direction uniform on the unit sphere.
  Eigen::Vector3d unit_vector();

  // Engine state as text, and back. Used by search checkpoints.
  std::string serialize() const;
  static Rng deserialize(const std::string& state);

 private:
  Rng() = default;
  std::mt19937_64 engine_;
};

// Stable 64-bit mix of (seed, index); the per-item stream seed used wherever
// work is split across objects or trials.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Seed derived from a seed and a label, e.g. derive_seed(run_seed, "target").
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

// FNV-1a over raw bytes.
std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);
inline std::uint64_t fnv1a64(std::string_view s) {
  return fnv1a64(s.data(), s.size());
}

}  // namespace autosynth

#endif  // AUTOSYNTH_RNG_HPP_
