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

// SDF -> triangle mesh conversion and the mesh-space versions of the
// composition operators (transform, truncation by clipping, merge-union).

#ifndef AUTOSYNTH_MESHING_HPP_
#define AUTOSYNTH_MESHING_HPP_

#include <span>

#include "autosynth/geometry.hpp"
#include "autosynth/mesh.hpp"

namespace autosynth {

struct GridSpec {
  Vec3 min = Vec3::Constant(-1.2);
  Vec3 max = Vec3::Constant(1.2);
  int resolution = 64;  // cells per axis

  Vec3 cell_size() const { return (max - min) / resolution; }
  double cell_diagonal() const { return cell_size().norm(); }
  bool is_valid() const;
};

// Grid used for the curved canonical primitives.
inline GridSpec default_grid() { return GridSpec{}; }

// Classic marching cubes over the cell grid. Vertices on shared edges are
// welded, faces are wound outward. Throws EmptySurface when the field does
// not change sign inside the grid.
TriangleMesh marching_cubes(const SdfNode& node, const GridSpec& grid);

// Cached unit mesh for a primitive kind. Polytopes come from their vertex
// tables, curved kinds from marching cubes on default_grid(). Thread-safe;
// every call returns a reference to the same mesh.
const TriangleMesh& canonical_mesh(PrimitiveKind kind);

// Maps every vertex v to T^-1(v) = L^-1 (v + t), so the result is the zero
// set of F(T(x)) when the input is the zero set of F. Throws
// SingularTransform when |det L| <= 1e-12.
TriangleMesh transform_mesh(const TriangleMesh& mesh, const AffineTransform& transform);

// Rigid placement v -> R v + t, used for poses and augmentation.
TriangleMesh rigid_transform_mesh(const TriangleMesh& mesh, const Mat3& rotation,
                                  const Vec3& translation);

// Keeps the part with plane.signed_distance <= 0, splitting crossing
// triangles. The cut is left open. Throws EmptySurface when nothing remains.
TriangleMesh clip_mesh(const TriangleMesh& mesh, const Plane& plane);

// Concatenation with index offsets; no welding, no boolean union.
TriangleMesh merge_meshes(std::span<const TriangleMesh> meshes);

// Centers the bounding box at the origin and scales the max vertex norm to 1.
// Throws DegenerateMesh when all vertices coincide.
TriangleMesh normalize_mesh(const TriangleMesh& mesh);

struct AxisBox {
  Vec3 min;
  Vec3 max;
};
AxisBox bounding_box(std::span<const Vec3> points);

}  // namespace autosynth

#endif  // AUTOSYNTH_MESHING_HPP_
