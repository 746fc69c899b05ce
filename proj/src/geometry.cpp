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

#include "autosynth/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/LU>

#include "autosynth/errors.hpp"

namespace autosynth {

namespace {

constexpr std::array<std::string_view, kNumPrimitiveKinds> kKindNames = {
    "sphere",      "cuboid",     "cone",        "cylinder",    "torus",
    "tetrahedron", "octahedron", "icosahedron", "dodecahedron",
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double sdf_cuboid(const Vec3& b, const Vec3& p) {
  const Vec3 q = p.cwiseAbs() - b;
  return q.cwiseMax(0.0).norm() + std::min(q.maxCoeff(), 0.0);
}

double sdf_cylinder(double r, double h, const Vec3& p) {
  const double dx = std::hypot(p.x(), p.y()) - r;
  const double dz = std::abs(p.z()) - h;
  const double outside = std::hypot(std::max(dx, 0.0), std::max(dz, 0.0));
  return std::min(std::max(dx, dz), 0.0) + outside;
}

double sdf_torus(double major, double minor, const Vec3& p) {
  return std::hypot(std::hypot(p.x(), p.y()) - major, p.z()) - minor;
}

// Capped cone with base radius r1 at z = -h and apex at z = +h.
double sdf_cone(double r1, double h, const Vec3& p) {
  const double qx = std::hypot(p.x(), p.y());
  const double qy = p.z();
  const double cap_radius = qy < 0.0 ? r1 : 0.0;
  const double ca_x = qx - std::min(qx, cap_radius);
  const double ca_y = std::abs(qy) - h;
  // Closest point on the slanted side segment from (0, h) to (r1, -h).
  const double k2x = -r1;
  const double k2y = 2.0 * h;
  const double t = std::clamp(((0.0 - qx) * k2x + (h - qy) * k2y) /
                                  (k2x * k2x + k2y * k2y),
                              0.0, 1.0);
  const double cb_x = qx + k2x * t;
  const double cb_y = qy - h + k2y * t;
  const double sign = (cb_x < 0.0 && ca_y < 0.0) ? -1.0 : 1.0;
  return sign * std::sqrt(std::min(ca_x * ca_x + ca_y * ca_y,
                                   cb_x * cb_x + cb_y * cb_y));
}

double sdf_polytope(const Polytope& poly, double scale, const Vec3& p) {
  double d = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.face_normals.size(); ++i) {
    d = std::max(d, poly.face_normals[i].dot(p) - scale * poly.face_offsets[i]);
  }
  return d;
}

// Convex hull of a small symmetric vertex set: every plane through three
// vertices with all others on one side is a face. Coplanar vertices are
// merged into one polygon and ordered counter-clockwise seen from outside.
Polytope build_polytope(std::vector<Vec3> vertices) {
  for (auto& v : vertices) v.normalize();
  Polytope poly;
  poly.vertices = vertices;
  const std::size_t n = vertices.size();
  constexpr double kEps = 1e-9;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Vec3 normal = (vertices[j] - vertices[i]).cross(vertices[k] - vertices[i]);
        if (normal.norm() < kEps) continue;
        normal.normalize();
        double offset = normal.dot(vertices[i]);
        if (offset < 0.0) {
          normal = -normal;
          offset = -offset;
        }
        const bool supporting = std::all_of(
            vertices.begin(), vertices.end(),
            [&](const Vec3& v) { return normal.dot(v) <= offset + kEps; });
        if (!supporting) continue;
        const bool seen = std::any_of(
            poly.face_normals.begin(), poly.face_normals.end(),
            [&](const Vec3& m) { return (m - normal).norm() < 1e-7; });
        if (seen) continue;

        std::vector<std::uint32_t> loop;
        Vec3 centroid = Vec3::Zero();
        for (std::size_t v = 0; v < n; ++v) {
          if (std::abs(normal.dot(vertices[v]) - offset) < 1e-7) {
            loop.push_back(static_cast<std::uint32_t>(v));
            centroid += vertices[v];
          }
        }
        centroid /= static_cast<double>(loop.size());
        const Vec3 u = (vertices[loop[0]] - centroid).normalized();
        const Vec3 w = normal.cross(u);
        auto angle = [&](std::uint32_t v) {
          const Vec3 d = vertices[v] - centroid;
          return std::atan2(d.dot(w), d.dot(u));
        };
        std::sort(loop.begin(), loop.end(), [&](std::uint32_t a, std::uint32_t b) {
          return angle(a) < angle(b);
        });
        poly.faces.push_back(std::move(loop));
        poly.face_normals.push_back(normal);
        poly.face_offsets.push_back(offset);
      }
    }
  }
  return poly;
}

std::vector<Vec3> polytope_vertices(PrimitiveKind kind) {
  const double phi = std::numbers::phi;
  std::vector<Vec3> v;
  switch (kind) {
    case PrimitiveKind::kCuboid:
      for (int s : {-1, 1})
        for (int t : {-1, 1})
          for (int u : {-1, 1}) v.emplace_back(s, t, u);
      break;
    case PrimitiveKind::kTetrahedron:
      v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
      break;
    case PrimitiveKind::kOctahedron:
      v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      break;
    case PrimitiveKind::kIcosahedron:
      for (int s : {-1, 1}) {
        for (int t : {-1, 1}) {
          v.emplace_back(0, s, t * phi);
          v.emplace_back(s, t * phi, 0);
          v.emplace_back(t * phi, 0, s);
        }
      }
      break;
    case PrimitiveKind::kDodecahedron:
      for (int s : {-1, 1})
        for (int t : {-1, 1})
          for (int u : {-1, 1}) v.emplace_back(s, t, u);
      for (int s : {-1, 1}) {
        for (int t : {-1, 1}) {
          v.emplace_back(0, s / phi, t * phi);
          v.emplace_back(s / phi, t * phi, 0);
          v.emplace_back(t * phi, 0, s / phi);
        }
      }
      break;
    default:
      throw InvalidArgument("canonical_polytope: kind has no vertex table");
  }
  return v;
}

}  // namespace

std::string_view to_string(PrimitiveKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<PrimitiveKind> primitive_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return kAllPrimitiveKinds[i];
  }
  return std::nullopt;
}

double Cone::base_radius() const { return height * std::tan(half_angle); }

PrimitiveKind kind_of(const Primitive& primitive) {
  return kAllPrimitiveKinds[primitive.index()];
}

Primitive canonical_primitive(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::kSphere: return Sphere{};
    case PrimitiveKind::kCuboid: return Cuboid{};
    case PrimitiveKind::kCone: return Cone{};
    case PrimitiveKind::kCylinder: return Cylinder{};
    case PrimitiveKind::kTorus: return Torus{};
    case PrimitiveKind::kTetrahedron: return Tetrahedron{};
    case PrimitiveKind::kOctahedron: return Octahedron{};
    case PrimitiveKind::kIcosahedron: return Icosahedron{};
    case PrimitiveKind::kDodecahedron: return Dodecahedron{};
  }
  throw InvalidArgument("canonical_primitive: unknown kind");
}

bool is_valid(const Primitive& primitive) {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  return std::visit(
      Overloaded{
          [&](const Sphere& s) { return positive(s.radius); },
          [&](const Cuboid& c) {
            return positive(c.half_extents.x()) && positive(c.half_extents.y()) &&
                   positive(c.half_extents.z());
          },
          [&](const Cone& c) {
            return positive(c.height) && positive(c.half_angle) &&
                   c.half_angle < std::numbers::pi / 2;
          },
          [&](const Cylinder& c) {
            return positive(c.radius) && positive(c.half_height);
          },
          [&](const Torus& t) {
            return positive(t.major_radius) && positive(t.minor_radius) &&
                   t.minor_radius < t.major_radius;
          },
          [&](const auto& solid) { return positive(solid.circumradius); },
      },
      primitive);
}

double circumradius(const Primitive& primitive) {
  return std::visit(
      Overloaded{
          [](const Sphere& s) { return s.radius; },
          [](const Cuboid& c) { return c.half_extents.norm(); },
          [](const Cone& c) { return std::hypot(c.height / 2, c.base_radius()); },
          [](const Cylinder& c) { return std::hypot(c.radius, c.half_height); },
          [](const Torus& t) { return t.major_radius + t.minor_radius; },
          [](const auto& solid) { return solid.circumradius; },
      },
      primitive);
}

const Polytope& canonical_polytope(PrimitiveKind kind) {
  static const std::array<Polytope, kNumPrimitiveKinds> table = [] {
    std::array<Polytope, kNumPrimitiveKinds> t;
    for (PrimitiveKind k :
         {PrimitiveKind::kCuboid, PrimitiveKind::kTetrahedron,
          PrimitiveKind::kOctahedron, PrimitiveKind::kIcosahedron,
          PrimitiveKind::kDodecahedron}) {
      t[static_cast<std::size_t>(k)] = build_polytope(polytope_vertices(k));
    }
    return t;
  }();
  const Polytope& poly = table[static_cast<std::size_t>(kind)];
  if (poly.vertices.empty()) {
    throw InvalidArgument("canonical_polytope: " + std::string(to_string(kind)) +
                          " is not a polytope");
  }
  return poly;
}

double eval_primitive_sdf(const Primitive& primitive, const Vec3& p) {
  return std::visit(
      Overloaded{
          [&](const Sphere& s) { return p.norm() - s.radius; },
          [&](const Cuboid& c) { return sdf_cuboid(c.half_extents, p); },
          [&](const Cone& c) { return sdf_cone(c.base_radius(), c.height / 2, p); },
          [&](const Cylinder& c) { return sdf_cylinder(c.radius, c.half_height, p); },
          [&](const Torus& t) { return sdf_torus(t.major_radius, t.minor_radius, p); },
          [&](const Tetrahedron& s) {
            return sdf_polytope(canonical_polytope(PrimitiveKind::kTetrahedron),
                                s.circumradius, p);
          },
          [&](const Octahedron& s) {
            return sdf_polytope(canonical_polytope(PrimitiveKind::kOctahedron),
                                s.circumradius, p);
          },
          [&](const Icosahedron& s) {
            return sdf_polytope(canonical_polytope(PrimitiveKind::kIcosahedron),
                                s.circumradius, p);
          },
          [&](const Dodecahedron& s) {
            return sdf_polytope(canonical_polytope(PrimitiveKind::kDodecahedron),
                                s.circumradius, p);
          },
      },
      primitive);
}

Mat3 shear_matrix(const Vec3& shear) {
  Mat3 sx = Mat3::Identity();
  Mat3 sy = Mat3::Identity();
  Mat3 sz = Mat3::Identity();
  sx(1, 0) = shear.x();
  sy(2, 1) = shear.y();
  sz(0, 2) = shear.z();
  return sx * sy * sz;
}

Mat3 axis_angle_rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

AffineTransform AffineTransform::translate(const Vec3& t) {
  AffineTransform tf;
  tf.translation = t;
  return tf;
}

AffineTransform AffineTransform::scale(double alpha) {
  AffineTransform tf;
  tf.alpha = alpha;
  return tf;
}

Mat3 AffineTransform::linear() const {
  return alpha * rotation * shear_matrix(shear) * stretch.asDiagonal();
}

Vec3 AffineTransform::apply_inverse(const Vec3& q) const {
  return linear().inverse() * (q + translation);
}

bool AffineTransform::is_valid() const {
  if (!std::isfinite(alpha) || alpha <= 0.0) return false;
  if (!rotation.allFinite() || !shear.allFinite() || !stretch.allFinite() ||
      !translation.allFinite()) {
    return false;
  }
  if ((stretch.array() <= 0.0).any()) return false;
  if (((rotation.transpose() * rotation) - Mat3::Identity()).cwiseAbs().maxCoeff() >
      1e-9) {
    return false;
  }
  if (std::abs(rotation.determinant() - 1.0) > 1e-9) return false;
  return std::abs(linear().determinant()) > 1e-12;
}

bool Plane::is_valid() const {
  return anchor.allFinite() && normal.allFinite() &&
         std::abs(normal.norm() - 1.0) <= 1e-9;
}

struct SdfNode::Node {
  struct Transformed {
    SdfNode child;
    Mat3 linear;
    Vec3 translation;
  };
  struct Truncated {
    SdfNode child;
    Plane plane;
  };
  struct Union {
    std::vector<SdfNode> children;
  };
  std::variant<Primitive, Transformed, Truncated, Union> value;
};

SdfNode SdfNode::primitive(Primitive primitive) {
  if (!is_valid(primitive)) throw InvalidArgument("SdfNode: invalid primitive");
  return SdfNode(std::make_shared<const Node>(Node{std::move(primitive)}));
}

SdfNode SdfNode::transformed(SdfNode child, const AffineTransform& transform) {
  if (!transform.is_valid()) throw InvalidArgument("SdfNode: invalid transform");
  return SdfNode(std::make_shared<const Node>(Node{Node::Transformed{
      std::move(child), transform.linear(), transform.translation}}));
}

SdfNode SdfNode::truncated(SdfNode child, const Plane& plane) {
  if (!plane.is_valid()) throw InvalidArgument("SdfNode: plane normal is not unit");
  return SdfNode(std::make_shared<const Node>(
      Node{Node::Truncated{std::move(child), plane}}));
}

SdfNode SdfNode::union_of(std::vector<SdfNode> children) {
  if (children.empty()) throw InvalidArgument("SdfNode: empty union");
  return SdfNode(
      std::make_shared<const Node>(Node{Node::Union{std::move(children)}}));
}

double SdfNode::eval(const Vec3& p) const {
  return std::visit(
      Overloaded{
          [&](const Primitive& prim) { return eval_primitive_sdf(prim, p); },
          [&](const Node::Transformed& t) {
            return t.child.eval(t.linear * p - t.translation);
          },
          [&](const Node::Truncated& t) {
            return std::max(t.child.eval(p), t.plane.signed_distance(p));
          },
          [&](const Node::Union& u) {
            double d = u.children.front().eval(p);
            for (std::size_t i = 1; i < u.children.size(); ++i) {
              d = std::min(d, u.children[i].eval(p));
            }
            return d;
          },
      },
      node_->value);
}

}  // namespace autosynth
