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


// The 11-label generation policy and its mapping to numeric sampling ranges.

#ifndef AUTOSYNTH_POLICY_HPP_
#define AUTOSYNTH_POLICY_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "autosynth/rng.hpp"

namespace autosynth {

inline constexpr std::size_t kPolicySize = 11;
inline constexpr int kNumLabels = 9;

// Label positions.
enum PolicySlot : std::size_t {
  kRotation = 0,
  kTranslation = 1,
  kScale = 2,
  kShearX = 3,
  kShearY = 4,
  kShearZ = 5,
  kStretchX = 6,
  kStretchY = 7,
  kStretchZ = 8,
  kPrimitiveCount = 9,
  kPlaneOffset = 10,
};

struct Policy {
  std::array<std::uint8_t, kPolicySize> labels{};

  bool is_valid() const;
  // Eleven decimal digits, e.g. "01234567888".
  std::string digits() const;
  // Canonical JSON: {"labels":[...],"version":1}
  std::string to_json() const;
  static Policy from_json(const std::string& text);
  // Base-9 index in [0, search_space_size()).
  std::uint64_t index() const;
  static Policy from_index(std::uint64_t index);

  auto operator<=>(const Policy&) const = default;
};

// Full envelopes reached at label 8; label l gives (l + 1) / 9 of them.
inline constexpr double kRotationEnvelope = 3.14159265358979323846;
inline constexpr double kTranslationEnvelope = 0.6;
inline constexpr double kScaleEnvelope = 0.5;
inline constexpr double kShearEnvelope = 0.6;
inline constexpr double kStretchEnvelope = 1.0;
inline constexpr double kPlaneOffsetEnvelope = 0.9;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool is_valid() const { return lo <= hi; }
  bool operator==(const Interval&) const = default;
};

struct GenerationRanges {
  double max_rotation = 0.0;        // angle in [0, max_rotation]
  double translation = 0.0;         // per axis in [-translation, translation]
  Interval alpha;                   // [1 - sigma, 1 + sigma]
  std::array<double, 3> shear{};    // per axis in [-s, s]
  std::array<Interval, 3> stretch;  // per axis in [1 / (1 + a), 1 + a]
  int primitive_count = 2;
  double plane_offset = 0.0;        // cut depth fraction in [0, plane_offset]

  bool is_valid() const;
  bool operator==(const GenerationRanges&) const = default;
};

inline constexpr double label_fraction(int label) { return (label + 1) / 9.0; }

Policy random_policy(Rng& rng);
// Changes one uniformly chosen position to one of its 8 other labels.
Policy mutate(const Policy& policy, Rng& rng);
GenerationRanges to_ranges(const Policy& policy);
Policy full_range_policy();

constexpr std::uint64_t search_space_size() {
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < kPolicySize; ++i) size *= kNumLabels;
  return size;
}

// Hex FNV-1a of the canonical JSON bytes.
std::string policy_hash(const Policy& policy);

void write_policy(const Policy& policy, const std::filesystem::path& path);
Policy read_policy(const std::filesystem::path& path);

}  // namespace autosynth

#endif  // AUTOSYNTH_POLICY_HPP_
