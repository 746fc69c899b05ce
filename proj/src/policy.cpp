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


#include "autosynth/policy.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "autosynth/errors.hpp"

namespace autosynth {

bool Policy::is_valid() const {
  for (auto l : labels) {
    if (l >= kNumLabels) return false;
  }
  return true;
}

std::string Policy::digits() const {
  std::string s;
  for (auto l : labels) s.push_back(static_cast<char>('0' + l));
  return s;
}

std::string Policy::to_json() const {
  nlohmann::json j;
  j["labels"] = nlohmann::json::array();
  for (auto l : labels) j["labels"].push_back(static_cast<int>(l));
  j["version"] = 1;
  return j.dump();
}

Policy Policy::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("policy JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("labels") || !j["labels"].is_array()) {
    throw InvalidArgument("policy JSON: missing \"labels\" array");
  }
  if (j.contains("version") && j["version"] != 1) {
    throw InvalidArgument("policy JSON: unsupported version " + j["version"].dump());
  }
  const auto& arr = j["labels"];
  if (arr.size() != kPolicySize) {
    throw InvalidArgument("policy JSON: expected 11 labels, got " + std::to_string(arr.size()));
  }
  Policy p;
  for (std::size_t i = 0; i < kPolicySize; ++i) {
    if (!arr[i].is_number_integer() || arr[i].get<int>() < 0 || arr[i].get<int>() >= kNumLabels) {
      throw InvalidArgument("policy JSON: label " + std::to_string(i) + " must be an integer in [0, 8]");
    }
    p.labels[i] = static_cast<std::uint8_t>(arr[i].get<int>());
  }
  return p;
}

std::uint64_t Policy::index() const {
  std::uint64_t v = 0;
  for (auto l : labels) v = v * kNumLabels + l;
  return v;
}

Policy Policy::from_index(std::uint64_t index) {
  if (index >= search_space_size()) throw InvalidArgument("policy index out of range");
  Policy p;
  for (std::size_t i = kPolicySize; i-- > 0;) {
    p.labels[i] = static_cast<std::uint8_t>(index % kNumLabels);
    index /= kNumLabels;
  }
  return p;
}

bool GenerationRanges::is_valid() const {
  if (!(max_rotation >= 0.0) || !(translation >= 0.0) || !(plane_offset >= 0.0)) return false;
  if (!alpha.is_valid() || !(alpha.lo > 0.0)) return false;
  for (int i = 0; i < 3; ++i) {
    if (!(shear[i] >= 0.0) || !stretch[i].is_valid() || !(stretch[i].lo > 0.0)) return false;
  }
  return primitive_count >= 1;
}

Policy random_policy(Rng& rng) {
  Policy p;
  for (auto& l : p.labels) l = static_cast<std::uint8_t>(rng.index(kNumLabels));
  return p;
}

Policy mutate(const Policy& policy, Rng& rng) {
  if (!policy.is_valid()) throw InvalidArgument("mutate: invalid policy");
  Policy child = policy;
  const std::size_t slot = rng.index(kPolicySize);
  // Skip over the current label so the draw is uniform over the other eight.
  auto label = static_cast<std::uint8_t>(rng.index(kNumLabels - 1));
  if (label >= policy.labels[slot]) ++label;
  child.labels[slot] = label;
  return child;
}

GenerationRanges to_ranges(const Policy& policy) {
  if (!policy.is_valid()) throw InvalidArgument("to_ranges: invalid policy");
  const auto f = [&](std::size_t slot) { return label_fraction(policy.labels[slot]); };
  GenerationRanges r;
  r.max_rotation = f(kRotation) * kRotationEnvelope;
  r.translation = f(kTranslation) * kTranslationEnvelope;
  const double sigma = f(kScale) * kScaleEnvelope;
  r.alpha = {1.0 - sigma, 1.0 + sigma};
  for (int i = 0; i < 3; ++i) {
    r.shear[i] = f(kShearX + i) * kShearEnvelope;
    const double a = f(kStretchX + i) * kStretchEnvelope;
    r.stretch[i] = {1.0 / (1.0 + a), 1.0 + a};
  }
  r.primitive_count = policy.labels[kPrimitiveCount] + 2;
  r.plane_offset = f(kPlaneOffset) * kPlaneOffsetEnvelope;
  return r;
}

Policy full_range_policy() {
  Policy p;
  p.labels.fill(kNumLabels - 1);
  return p;
}

std::string policy_hash(const Policy& policy) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(policy.to_json())));
  return buf;
}

void write_policy(const Policy& policy, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << policy.to_json() << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Policy read_policy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return Policy::from_json(ss.str());
}

}  // namespace autosynth
