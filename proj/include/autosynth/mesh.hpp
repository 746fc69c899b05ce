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

#ifndef AUTOSYNTH_MESH_HPP_
#define AUTOSYNTH_MESH_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "autosynth/geometry.hpp"

namespace autosynth {

using Face = std::array<std::uint32_t, 3>;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  bool empty() const { return faces.empty(); }
  // Indices in range, no repeated index within a face, finite vertices.
  bool is_valid() const;
  double triangle_area(std::size_t face) const;
  double surface_area() const;
  // Divergence-theorem volume; meaningful for closed, outward-wound meshes.
  double signed_volume() const;

  bool operator==(const TriangleMesh&) const = default;
};

struct PointCloud {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  bool operator==(const PointCloud&) const = default;
};

}  // namespace autosynth

#endif  // AUTOSYNTH_MESH_HPP_
