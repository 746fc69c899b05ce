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


// Shared helpers for the unit suites.
#ifndef AUTOSYNTH_TESTS_SUPPORT_HPP_
#define AUTOSYNTH_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <string>

#include "autosynth/geometry.hpp"
#include "autosynth/mesh.hpp"
#include "autosynth/rng.hpp"

namespace autosynth::test {

inline PointCloud random_cloud(Rng& rng, std::size_t n, double extent = 1.0) {
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) {
    c.points.emplace_back(rng.uniform(-extent, extent), rng.uniform(-extent, extent),
                          rng.uniform(-extent, extent));
  }
  return c;
}

inline AffineTransform random_transform(Rng& rng) {
  AffineTransform t;
  t.alpha = rng.uniform(0.5, 1.5);
  t.rotation = axis_angle_rotation(rng.unit_vector(), rng.uniform(0.0, 3.14159));
  t.shear = Vec3(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
  t.stretch = Vec3(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
  t.translation = Vec3(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
  return t;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("autosynth_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Distance from p to triangle abc (closest point by region tests).
inline double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return (p - a).norm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return (p - b).norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (p - (a + ab * (d1 / (d1 - d3)))).norm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return (p - c).norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (p - (a + ac * (d2 / (d2 - d6)))).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    return (p - (b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6))))).norm();
  }
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).norm();
}

inline double distance_to_mesh(const Vec3& p, const TriangleMesh& m) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : m.faces) {
    best = std::min(best, point_triangle_distance(p, m.vertices[f[0]], m.vertices[f[1]],
                                                  m.vertices[f[2]]));
  }
  return best;
}

}  // namespace autosynth::test

#endif  // AUTOSYNTH_TESTS_SUPPORT_HPP_
