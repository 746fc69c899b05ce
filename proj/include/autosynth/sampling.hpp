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


// Point clouds from meshes: area-weighted surface sampling, uniform random
// rotations, and a small z-buffer rasterizer for partial depth views.

#ifndef AUTOSYNTH_SAMPLING_HPP_
#define AUTOSYNTH_SAMPLING_HPP_

#include <cstdint>
#include <limits>
#include <vector>

#include "autosynth/geometry.hpp"
#include "autosynth/mesh.hpp"
#include "autosynth/rng.hpp"

namespace autosynth {

// Throws DegenerateMesh when the total area is zero, InvalidArgument for n == 0.
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, Rng& rng);
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

// Uniform over SO(3): normalized quaternion of four standard normals.
Mat3 random_rotation(Rng& rng);
Mat3 random_rotation(std::uint64_t seed);

struct CameraPose {
  Vec3 position = Vec3(0, 0, 3);
  Vec3 target = Vec3::Zero();
  Vec3 up = Vec3::UnitY();
  double focal = 80.0;  // pixels
  int width = 128;
  int height = 128;

  bool is_valid() const;
  // Rows are the camera axes in world coordinates: x right, y down, z forward.
  Mat3 world_to_camera() const;
  Vec3 to_camera(const Vec3& world) const;
  Vec3 to_world(const Vec3& camera) const;
  double cx() const { return 0.5 * width; }
  double cy() const { return 0.5 * height; }
};

inline constexpr double kDefaultCameraMinRadius = 2.2;
inline constexpr double kDefaultCameraMaxRadius = 4.0;

struct DepthMap {
  static constexpr double kNoHit = std::numeric_limits<double>::infinity();

  int width = 0;
  int height = 0;
  std::vector<double> depth;  // row-major, camera-frame z, kNoHit if empty

  double at(int x, int y) const { return depth[static_cast<std::size_t>(y) * width + x]; }
  bool hit(int x, int y) const { return at(x, y) != kNoHit; }
  std::size_t hit_count() const;
};

// Perspective z-buffer rasterization with perspective-correct depth. Pixel
// (x, y) samples the image point (x + 0.5, y + 0.5). Triangles reaching
// behind the near plane are skipped. Throws NothingVisible.
DepthMap render_depth(const TriangleMesh& mesh, const CameraPose& camera);

// Back-projects hit pixel centers into world space and draws n of them:
// without replacement when there are at least n hits, with replacement
// otherwise. Throws EmptyDepth.
PointCloud depth_to_cloud(const DepthMap& depth, const CameraPose& camera, std::size_t n,
                          Rng& rng);
PointCloud depth_to_cloud(const DepthMap& depth, const CameraPose& camera, std::size_t n,
                          std::uint64_t seed);

// Camera on a random direction at a radius uniform in [r_min, r_max],
// looking at the origin. Intrinsics keep their CameraPose defaults.
CameraPose random_camera(Rng& rng, double r_min = kDefaultCameraMinRadius,
                         double r_max = kDefaultCameraMaxRadius);
CameraPose random_camera(std::uint64_t seed, double r_min = kDefaultCameraMinRadius,
                         double r_max = kDefaultCameraMaxRadius);

}  // namespace autosynth

#endif  // AUTOSYNTH_SAMPLING_HPP_
