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

// Signed distance functions for the nine shape primitives, the affine query
// transform, and the truncation / union composition operators.

#ifndef AUTOSYNTH_GEOMETRY_HPP_
#define AUTOSYNTH_GEOMETRY_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace autosynth {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class PrimitiveKind : std::uint8_t {
  kSphere,
  kCuboid,
  kCone,
  kCylinder,
  kTorus,
  kTetrahedron,
  kOctahedron,
  kIcosahedron,
  kDodecahedron,
};

inline constexpr std::size_t kNumPrimitiveKinds = 9;
inline constexpr std::array<PrimitiveKind, kNumPrimitiveKinds> kAllPrimitiveKinds = {
    PrimitiveKind::kSphere,      PrimitiveKind::kCuboid,
    PrimitiveKind::kCone,        PrimitiveKind::kCylinder,
    PrimitiveKind::kTorus,       PrimitiveKind::kTetrahedron,
    PrimitiveKind::kOctahedron,  PrimitiveKind::kIcosahedron,
    PrimitiveKind::kDodecahedron,
};

std::string_view to_string(PrimitiveKind kind);
std::optional<PrimitiveKind> primitive_kind_from_string(std::string_view name);

// Shape parameters per kind. Default values give the canonical unit-sized
// primitive: centered at the origin with circumradius 1.
struct Sphere {
  double radius = 1.0;
};
struct Cuboid {
  Vec3 half_extents = Vec3::Constant(0.57735026918962576);  // 1/sqrt(3)
};
// Finite cone, apex up (+z), base disk at z = -height/2, apex at +height/2.
struct Cone {
  double half_angle = 0.35877067027057225;  // atan(0.6 / 1.6)
  double height = 1.6;
  double base_radius() const;
};
// Axis along z.
struct Cylinder {
  double radius = 0.6;
  double half_height = 0.8;
};
// Ring in the xy-plane.
struct Torus {
  double major_radius = 0.7;
  double minor_radius = 0.3;
};
struct Tetrahedron {
  double circumradius = 1.0;
};
struct Octahedron {
  double circumradius = 1.0;
};
struct Icosahedron {
  double circumradius = 1.0;
};
struct Dodecahedron {
  double circumradius = 1.0;
};

using Primitive = std::variant<Sphere, Cuboid, Cone, Cylinder, Torus,
                               Tetrahedron, Octahedron, Icosahedron,
                               Dodecahedron>;

PrimitiveKind kind_of(const Primitive& primitive);
Primitive canonical_primitive(PrimitiveKind kind);
// Size parameters positive, torus minor radius below the major radius.
bool is_valid(const Primitive& primitive);
double circumradius(const Primitive& primitive);

// Exact Euclidean distance for sphere, cuboid, cylinder, torus and cone.
// Platonic solids return the max over face-plane distances: exact inside and
// on the surface, a lower bound outside.
double eval_primitive_sdf(const Primitive& primitive, const Vec3& p);

// Unit-circumradius vertex table and the (outward) face planes of a platonic
// solid or the canonical cuboid. Faces are listed as vertex index loops in
// counter-clockwise order seen from outside.
struct Polytope {
  std::vector<Vec3> vertices;
  std::vector<std::vector<std::uint32_t>> faces;
  std::vector<Vec3> face_normals;
  std::vector<double> face_offsets;  // normal . x <= offset inside
};
// Only valid for kCuboid and the four platonic kinds.
const Polytope& canonical_polytope(PrimitiveKind kind);

// Query-point transform T(x) = alpha * R * Sh * St * x - t.
//
// Sh = Sx * Sy * Sz with single-coefficient shears (Sx adds shear.x * x to y,
// Sy adds shear.y * y to z, Sz adds shear.z * z to x). St = diag(stretch).
// Evaluating F(T(x)) yields the primitive mapped by T^-1, so alpha = 2 halves
// the shape and t moves a centered shape's center to L^-1 t.
struct AffineTransform {
  double alpha = 1.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 shear = Vec3::Zero();
  Vec3 stretch = Vec3::Ones();
  Vec3 translation = Vec3::Zero();

  static AffineTransform identity() { return {}; }
  static AffineTransform translate(const Vec3& t);
  static AffineTransform scale(double alpha);

  // alpha * R * Sh * St
  Mat3 linear() const;
  Vec3 apply(const Vec3& p) const { return linear() * p - translation; }
  // L^-1 (q + t)
  Vec3 apply_inverse(const Vec3& q) const;
  // Rotation orthonormal with det 1 (1e-9), alpha and stretch positive,
  // linear part invertible, every entry finite.
  bool is_valid() const;

  bool operator==(const AffineTransform&) const = default;
};

Mat3 shear_matrix(const Vec3& shear);
Mat3 axis_angle_rotation(const Vec3& axis, double angle);

inline Vec3 apply_transform(const AffineTransform& transform, const Vec3& p) {
  return transform.apply(p);
}

struct Plane {
  Vec3 anchor = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();

  double signed_distance(const Vec3& p) const { return normal.dot(p - anchor); }
  bool is_valid() const;

  bool operator==(const Plane&) const = default;
};

// Immutable composition tree. Copies share structure.
class SdfNode {
 public:
  static SdfNode primitive(Primitive primitive);
  static SdfNode transformed(SdfNode child, const AffineTransform& transform);
  static SdfNode truncated(SdfNode child, const Plane& plane);
  static SdfNode union_of(std::vector<SdfNode> children);

  double eval(const Vec3& p) const;

 private:
  struct Node;
  explicit SdfNode(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline double eval_sdf(const SdfNode& node, const Vec3& p) {
  return node.eval(p);
}

}  // namespace autosynth

#endif  // AUTOSYNTH_GEOMETRY_HPP_
