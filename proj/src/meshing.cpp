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

#include "autosynth/meshing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>

#include <Eigen/LU>

#include "autosynth/errors.hpp"
#include "mc_tables.hpp"

namespace autosynth {

bool TriangleMesh::is_valid() const {
  for (const Vec3& v : vertices) {
    if (!v.allFinite()) return false;
  }
  const auto n = static_cast<std::uint32_t>(vertices.size());
  for (const Face& f : faces) {
    if (f[0] >= n || f[1] >= n || f[2] >= n) return false;
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) return false;
  }
  return true;
}

double TriangleMesh::triangle_area(std::size_t face) const {
  const Face& f = faces[face];
  return 0.5 * (vertices[f[1]] - vertices[f[0]])
                   .cross(vertices[f[2]] - vertices[f[0]])
                   .norm();
}

double TriangleMesh::surface_area() const {
  double area = 0.0;
  for (std::size_t i = 0; i < faces.size(); ++i) area += triangle_area(i);
  return area;
}

double TriangleMesh::signed_volume() const {
  double volume = 0.0;
  for (const Face& f : faces) {
    volume += vertices[f[0]].dot(vertices[f[1]].cross(vertices[f[2]]));
  }
  return volume / 6.0;
}

bool GridSpec::is_valid() const {
  return resolution >= 8 && min.allFinite() && max.allFinite() &&
         (min.array() < max.array()).all();
}

namespace {

// Corner offsets and edge endpoints in the table's corner numbering.
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
constexpr int kEdgeCorners[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0},
                                     {4, 5}, {5, 6}, {6, 7}, {7, 4},
                                     {0, 4}, {1, 5}, {2, 6}, {3, 7}};

}  // namespace

TriangleMesh marching_cubes(const SdfNode& node, const GridSpec& grid) {
  if (!grid.is_valid()) throw InvalidArgument("marching_cubes: invalid grid");
  const int n = grid.resolution;
  const int np = n + 1;
  const Vec3 step = grid.cell_size();
  auto point_index = [np](int i, int j, int k) {
    return (static_cast<std::size_t>(k) * np + j) * np + i;
  };
  auto position = [&](int i, int j, int k) {
    return Vec3(grid.min.x() + i * step.x(), grid.min.y() + j * step.y(),
                grid.min.z() + k * step.z());
  };

  std::vector<double> field(static_cast<std::size_t>(np) * np * np);
  bool has_inside = false;
  bool has_outside = false;
  for (int k = 0; k < np; ++k) {
    for (int j = 0; j < np; ++j) {
      for (int i = 0; i < np; ++i) {
        const double d = node.eval(position(i, j, k));
        field[point_index(i, j, k)] = d;
        (d < 0.0 ? has_inside : has_outside) = true;
      }
    }
  }
  if (!has_inside || !has_outside) {
    throw EmptySurface("marching_cubes: no sign change inside the grid");
  }

  TriangleMesh mesh;
  // Vertex id per grid edge, keyed by (lower grid point, axis).
  std::vector<std::int32_t> edge_vertex(field.size() * 3, -1);
  auto edge_id = [&](int i, int j, int k, int e) -> std::uint32_t {
    const int* a = kCorner[kEdgeCorners[e][0]];
    const int* b = kCorner[kEdgeCorners[e][1]];
    const int ai = i + std::min(a[0], b[0]);
    const int aj = j + std::min(a[1], b[1]);
    const int ak = k + std::min(a[2], b[2]);
    const int axis = a[0] != b[0] ? 0 : (a[1] != b[1] ? 1 : 2);
    const std::size_t lo = point_index(ai, aj, ak);
    std::int32_t& slot = edge_vertex[lo * 3 + axis];
    if (slot < 0) {
      const std::size_t hi = point_index(ai + (axis == 0), aj + (axis == 1),
                                         ak + (axis == 2));
      const double va = field[lo];
      const double vb = field[hi];
      const double t = va / (va - vb);
      const Vec3 pa = position(ai, aj, ak);
      const Vec3 pb = position(ai + (axis == 0), aj + (axis == 1), ak + (axis == 2));
      slot = static_cast<std::int32_t>(mesh.vertices.size());
      mesh.vertices.push_back(pa + t * (pb - pa));
    }
    return static_cast<std::uint32_t>(slot);
  };

  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        int config = 0;
        for (int c = 0; c < 8; ++c) {
          if (field[point_index(i + kCorner[c][0], j + kCorner[c][1],
                                k + kCorner[c][2])] < 0.0) {
            config |= 1 << c;
          }
        }
        const int* tri = detail::kTriangleTable[config];
        for (int t = 0; tri[t] >= 0; t += 3) {
          // The table winds toward the inside; swap to face outward.
          mesh.faces.push_back({edge_id(i, j, k, tri[t]),
                                edge_id(i, j, k, tri[t + 2]),
                                edge_id(i, j, k, tri[t + 1])});
        }
      }
    }
  }
  return mesh;
}

const TriangleMesh& canonical_mesh(PrimitiveKind kind) {
  static const std::array<TriangleMesh, kNumPrimitiveKinds> cache = [] {
    std::array<TriangleMesh, kNumPrimitiveKinds> meshes;
    for (PrimitiveKind k : kAllPrimitiveKinds) {
      TriangleMesh& mesh = meshes[static_cast<std::size_t>(k)];
      switch (k) {
        case PrimitiveKind::kSphere:
        case PrimitiveKind::kCone:
        case PrimitiveKind::kCylinder:
        case PrimitiveKind::kTorus:
          mesh = marching_cubes(SdfNode::primitive(canonical_primitive(k)),
                                default_grid());
          break;
        default: {
          const Polytope& poly = canonical_polytope(k);
          mesh.vertices = poly.vertices;
          for (const auto& loop : poly.faces) {
            for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
              mesh.faces.push_back({loop[0], loop[i], loop[i + 1]});
            }
          }
        }
      }
    }
    return meshes;
  }();
  return cache[static_cast<std::size_t>(kind)];
}

TriangleMesh transform_mesh(const TriangleMesh& mesh,
                            const AffineTransform& transform) {
  const Mat3 linear = transform.linear();
  const double det = linear.determinant();
  if (!std::isfinite(det) || std::abs(det) <= 1e-12) {
    throw SingularTransform("transform_mesh: linear part is singular");
  }
  const Mat3 inverse = linear.inverse();
  TriangleMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) {
    out.vertices.push_back(inverse * (v + transform.translation));
  }
  out.faces = mesh.faces;
  if (det < 0.0) {
    for (Face& f : out.faces) std::swap(f[1], f[2]);
  }
  return out;
}

TriangleMesh rigid_transform_mesh(const TriangleMesh& mesh, const Mat3& rotation,
                                  const Vec3& translation) {
  TriangleMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) out.vertices.push_back(rotation * v + translation);
  out.faces = mesh.faces;
  return out;
}

TriangleMesh clip_mesh(const TriangleMesh& mesh, const Plane& plane) {
  std::vector<double> dist(mesh.vertices.size());
  bool any_kept = false;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    dist[i] = plane.signed_distance(mesh.vertices[i]);
    any_kept = any_kept || dist[i] <= 0.0;
  }
  if (!any_kept) throw EmptySurface("clip_mesh: every vertex is cut away");

  TriangleMesh out;
  std::vector<std::int64_t> remap(mesh.vertices.size(), -1);
  auto keep_vertex = [&](std::uint32_t v) {
    if (remap[v] < 0) {
      remap[v] = static_cast<std::int64_t>(out.vertices.size());
      out.vertices.push_back(mesh.vertices[v]);
    }
    return static_cast<std::uint32_t>(remap[v]);
  };
  std::unordered_map<std::uint64_t, std::uint32_t> cut_vertex;
  auto cut = [&](std::uint32_t a, std::uint32_t b) {
    const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                              std::max(a, b);
    auto it = cut_vertex.find(key);
    if (it != cut_vertex.end()) return it->second;
    // Interpolate from the lower index so both neighbours get the same point.
    const std::uint32_t lo = std::min(a, b);
    const std::uint32_t hi = std::max(a, b);
    const double t = dist[lo] / (dist[lo] - dist[hi]);
    const Vec3 p = mesh.vertices[lo] + t * (mesh.vertices[hi] - mesh.vertices[lo]);
    const auto id = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.push_back(p);
    cut_vertex.emplace(key, id);
    return id;
  };

  std::vector<std::uint32_t> polygon;
  for (const Face& f : mesh.faces) {
    const bool in0 = dist[f[0]] <= 0.0;
    const bool in1 = dist[f[1]] <= 0.0;
    const bool in2 = dist[f[2]] <= 0.0;
    if (in0 && in1 && in2) {
      out.faces.push_back({keep_vertex(f[0]), keep_vertex(f[1]), keep_vertex(f[2])});
      continue;
    }
    if (!in0 && !in1 && !in2) continue;
    polygon.clear();
    for (int e = 0; e < 3; ++e) {
      const std::uint32_t a = f[e];
      const std::uint32_t b = f[(e + 1) % 3];
      if (dist[a] <= 0.0) polygon.push_back(keep_vertex(a));
      const bool crosses = (dist[a] < 0.0 && dist[b] > 0.0) ||
                           (dist[a] > 0.0 && dist[b] < 0.0);
      if (crosses) polygon.push_back(cut(a, b));
    }
    for (std::size_t i = 1; i + 1 < polygon.size(); ++i) {
      out.faces.push_back({polygon[0], polygon[i], polygon[i + 1]});
    }
  }
  if (out.faces.empty()) throw EmptySurface("clip_mesh: no triangle survives the cut");

  // Vertices touched only by dropped faces were never added; cut points can
  // land a hair above the plane through rounding, so pin them.
  for (Vec3& v : out.vertices) {
    const double d = plane.signed_distance(v);
    if (d > 0.0) v -= d * plane.normal;
  }
  return out;
}

TriangleMesh merge_meshes(std::span<const TriangleMesh> meshes) {
  if (meshes.empty()) throw InvalidArgument("merge_meshes: empty list");
  TriangleMesh out;
  std::size_t nv = 0;
  std::size_t nf = 0;
  for (const auto& m : meshes) {
    nv += m.vertices.size();
    nf += m.faces.size();
  }
  out.vertices.reserve(nv);
  out.faces.reserve(nf);
  for (const auto& m : meshes) {
    const auto offset = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), m.vertices.begin(), m.vertices.end());
    for (const Face& f : m.faces) {
      out.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
    }
  }
  return out;
}

AxisBox bounding_box(std::span<const Vec3> points) {
  AxisBox box{Vec3::Constant(std::numeric_limits<double>::infinity()),
              Vec3::Constant(-std::numeric_limits<double>::infinity())};
  for (const Vec3& p : points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

TriangleMesh normalize_mesh(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw DegenerateMesh("normalize_mesh: no vertices");
  const AxisBox box = bounding_box(mesh.vertices);
  const Vec3 center = 0.5 * (box.min + box.max);
  double radius = 0.0;
  for (const Vec3& v : mesh.vertices) radius = std::max(radius, (v - center).norm());
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DegenerateMesh("normalize_mesh: all vertices coincide");
  }
  TriangleMesh out;
  out.faces = mesh.faces;
  out.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) out.vertices.push_back((v - center) / radius);
  return out;
}

}  // namespace autosynth
