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


#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "doctest.h"

#include "autosynth/errors.hpp"
#include "autosynth/policy.hpp"
#include "support.hpp"

using namespace autosynth;

namespace {

int hamming(const Policy& a, const Policy& b) {
  int d = 0;
  for (std::size_t i = 0; i < kPolicySize; ++i) d += a.labels[i] != b.labels[i];
  return d;
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("search space size") {
  CHECK(search_space_size() == 31381059609ULL);
  std::uint64_t p = 1;
  for (int i = 0; i < 11; ++i) p *= 9;
  CHECK(search_space_size() == p);
  static_assert(search_space_size() == 31381059609ULL);
}

TEST_CASE("base-9 bijection") {
  CHECK(Policy::from_index(0) == Policy{});
  CHECK(Policy::from_index(search_space_size() - 1) == full_range_policy());
  CHECK(full_range_policy().index() == search_space_size() - 1);
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const Policy p = random_policy(rng);
    CHECK(p.index() < search_space_size());
    CHECK(Policy::from_index(p.index()) == p);
    const std::uint64_t k = rng.index(search_space_size());
    CHECK(Policy::from_index(k).index() == k);
  }
  // Lexicographic order on labels matches index order.
  Policy a, b;
  a.labels[10] = 8;
  b.labels[9] = 1;
  CHECK(a < b);
  CHECK(a.index() < b.index());
  CHECK_THROWS_AS(Policy::from_index(search_space_size()), InvalidArgument);
}

TEST_CASE("random_policy: valid, reproducible, uniform per cell") {
  Rng a(5), b(5);
  CHECK(random_policy(a) == random_policy(b));
  Rng rng(99);
  std::array<std::array<int, 9>, 11> counts{};
  const int n = 90000;
  for (int i = 0; i < n; ++i) {
    const Policy p = random_policy(rng);
    REQUIRE(p.is_valid());
    for (std::size_t k = 0; k < kPolicySize; ++k) ++counts[k][p.labels[k]];
  }
  for (const auto& row : counts) {
    for (int c : row) {
      CHECK(c >= 0.10 * n);
      CHECK(c <= 0.122 * n);
    }
  }
}

TEST_CASE("mutate: Hamming distance one, never the input") {
  Rng rng(3);
  const Policy zero{};
  for (int i = 0; i < 1000; ++i) {
    const Policy c = mutate(zero, rng);
    CHECK(hamming(zero, c) == 1);
    CHECK(c.is_valid());
  }
  for (int i = 0; i < 1000; ++i) {
    const Policy p = random_policy(rng);
    const Policy c = mutate(p, rng);
    CHECK(hamming(p, c) == 1);
    CHECK(c != p);
  }
  const Policy full = full_range_policy();
  const Policy c = mutate(full, rng);
  int below = 0;
  for (auto l : c.labels) below += l < 8;
  CHECK(below == 1);
}

TEST_CASE("mutate reaches exactly the 88 neighbours, uniformly") {
  Rng rng(17);
  const Policy p = random_policy(rng);
  std::set<Policy> neighbours;
  for (std::size_t k = 0; k < kPolicySize; ++k) {
    for (int l = 0; l < kNumLabels; ++l) {
      if (l == p.labels[k]) continue;
      Policy q = p;
      q.labels[k] = static_cast<std::uint8_t>(l);
      neighbours.insert(q);
    }
  }
  REQUIRE(neighbours.size() == 88);
  std::map<Policy, int> seen;
  const int n = 88000;
  for (int i = 0; i < n; ++i) ++seen[mutate(p, rng)];
  CHECK(seen.size() == 88);
  double chi2 = 0.0;
  for (const auto& [child, count] : seen) {
    CHECK(neighbours.count(child) == 1);
    chi2 += (count - 1000.0) * (count - 1000.0) / 1000.0;
  }
  CHECK(chi2 < 135.0);  // chi-square 0.999 quantile, 87 degrees of freedom is ~133.5
}

TEST_CASE("to_ranges mapping") {
  Policy p;
  p.labels[kRotation] = 8;
  p.labels[kTranslation] = 2;
  p.labels[kPrimitiveCount] = 0;
  const GenerationRanges r = to_ranges(p);
  CHECK(r.max_rotation == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(r.translation == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(r.primitive_count == 2);
  CHECK(r.alpha.lo == doctest::Approx(1 - 0.5 / 9));
  CHECK(r.alpha.hi == doctest::Approx(1 + 0.5 / 9));
  CHECK(r.shear[0] == doctest::Approx(0.6 / 9));
  CHECK(r.stretch[1].lo == doctest::Approx(1 / (1 + 1.0 / 9)));
  CHECK(r.stretch[1].hi == doctest::Approx(1 + 1.0 / 9));
  CHECK(r.plane_offset == doctest::Approx(0.1));

  const GenerationRanges full = to_ranges(full_range_policy());
  CHECK(full.max_rotation == doctest::Approx(std::numbers::pi));
  CHECK(full.primitive_count == 10);
  CHECK(full.translation == doctest::Approx(0.6));
  CHECK(full.alpha.lo == doctest::Approx(0.5));
  CHECK(full.alpha.hi == doctest::Approx(1.5));
  CHECK(full.stretch[2].lo == doctest::Approx(0.5));
  CHECK(full.stretch[2].hi == doctest::Approx(2.0));
  CHECK(full.plane_offset == doctest::Approx(0.9));
}

TEST_CASE("to_ranges is monotone, valid and pure") {
  Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    const Policy p = random_policy(rng);
    const GenerationRanges r = to_ranges(p);
    CHECK(r.is_valid());
    CHECK(r.alpha.lo > 0.0);
    CHECK(to_ranges(p) == r);
    Policy up = p;
    const std::size_t k = rng.index(kPolicySize);
    if (up.labels[k] == 8) continue;
    ++up.labels[k];
    const GenerationRanges s = to_ranges(up);
    CHECK(s.max_rotation >= r.max_rotation);
    CHECK(s.translation >= r.translation);
    CHECK(s.alpha.hi >= r.alpha.hi);
    CHECK(s.primitive_count >= r.primitive_count);
    CHECK(s.plane_offset >= r.plane_offset);
  }
}

TEST_CASE("JSON format and round trip") {
  Policy p;
  for (std::size_t i = 0; i < kPolicySize; ++i) p.labels[i] = static_cast<std::uint8_t>(i % 9);
  CHECK(p.to_json() == R"({"labels":[0,1,2,3,4,5,6,7,8,0,1],"version":1})");
  CHECK(p.digits() == "01234567801");
  CHECK(Policy::from_json(p.to_json()) == p);
  CHECK(Policy::from_json(R"({ "version": 1, "labels": [0,1,2,3,4,5,6,7,8,0,1] })") == p);
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const Policy q = random_policy(rng);
    CHECK(Policy::from_json(q.to_json()) == q);
    CHECK(Policy::from_json(q.to_json()).to_json() == q.to_json());
  }
  CHECK_THROWS_AS(Policy::from_json(R"({"labels":[0,1,2,3,4,5,6,7,8,0],"version":1})"), InvalidArgument);
  CHECK_THROWS_AS(Policy::from_json(R"({"labels":[0,1,2,3,4,5,6,7,8,0,9],"version":1})"), InvalidArgument);
  CHECK_THROWS_AS(Policy::from_json(R"({"labels":[0,1,2,3,4,5,6,7,8,0,-1],"version":1})"), InvalidArgument);
  CHECK_THROWS_AS(Policy::from_json(R"({"labels":[0,1,2,3,4,5,6,7,8,0,1],"version":2})"), InvalidArgument);
  CHECK_THROWS_AS(Policy::from_json(R"({"labels":[0,1,2,3,4,5,6,7,8,0,"1"]})"), InvalidArgument);
  CHECK_THROWS_AS(Policy::from_json("[1,2,3"), InvalidArgument);
}

TEST_CASE("policy files and hashes") {
  const auto dir = test::scratch_dir("policy");
  Rng rng(2);
  const Policy p = random_policy(rng);
  write_policy(p, dir / "p.json");
  CHECK(read_policy(dir / "p.json") == p);
  CHECK_THROWS_AS(read_policy(dir / "none.json"), IoError);
  const std::string h = policy_hash(p);
  CHECK(h.size() == 16);
  char expect[17];
  std::snprintf(expect, sizeof expect, "%016llx", static_cast<unsigned long long>(fnv1a64(p.to_json())));
  CHECK(h == expect);
  CHECK(policy_hash(p) != policy_hash(mutate(p, rng)));
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

}  // TEST_SUITE
