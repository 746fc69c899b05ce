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


#include "autosynth/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "autosynth/errors.hpp"

namespace autosynth {

PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidArgument("sample_surface: n must be at least 1");
  std::vector<double> cdf(mesh.faces.size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    total += mesh.triangle_area(f);
    cdf[f] = total;
  }
  if (!(total > 0.0)) throw DegenerateMesh("sample_surface: mesh has zero surface area");

  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;  // u rounded up to total
    const Face& face = mesh.faces[static_cast<std::size_t>(it - cdf.begin())];
    const double s = std::sqrt(rng.uniform());
    const double r = rng.uniform();
    const Vec3& a = mesh.vertices[face[0]];
    const Vec3& b = mesh.vertices[face[1]];
    const Vec3& c = mesh.vertices[face[2]];
    cloud.points.push_back((1.0 - s) * a + s * (1.0 - r) * b + s * r * c);
  }
  return cloud;
}

PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_surface(mesh, n, rng);
}

Mat3 random_rotation(Rng& rng) {
  Eigen::Vector4d q;
  do {
    for (int i = 0; i < 4; ++i) q[i] = rng.normal();
  } while (q.squaredNorm() < 1e-20);
  q.normalize();
  return Eigen::Quaterniond(q[0], q[1], q[2], q[3]).toRotationMatrix();
}

Mat3 random_rotation(std::uint64_t seed) {
  Rng rng(seed);
  return random_rotation(rng);
}

bool CameraPose::is_valid() const {
  if (!position.allFinite() || !target.allFinite() || !up.allFinite()) return false;
  if ((target - position).norm() < 1e-12) return false;
  if (!(focal > 0.0) || width <= 0 || height <= 0) return false;
  const Vec3 forward = (target - position).normalized();
  return forward.cross(up).norm() > 1e-9;
}

Mat3 CameraPose::world_to_camera() const {
  const Vec3 forward = (target - position).normalized();
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 down = forward.cross(right);
  Mat3 m;
  m.row(0) = right.transpose();
  m.row(1) = down.transpose();
  m.row(2) = forward.transpose();
  return m;
}

Vec3 CameraPose::to_camera(const Vec3& world) const {
  return world_to_camera() * (world - position);
}

Vec3 CameraPose::to_world(const Vec3& camera) const {
  return position + world_to_camera().transpose() * camera;
}

std::size_t DepthMap::hit_count() const {
  return static_cast<std::size_t>(
      std::count_if(depth.begin(), depth.end(), [](double z) { return z != kNoHit; }));
}

namespace {

constexpr double kNearPlane = 1e-6;

double edge(double ax, double ay, double bx, double by, double px, double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

}  // namespace

DepthMap render_depth(const TriangleMesh& mesh, const CameraPose& camera) {
  if (!camera.is_valid()) throw InvalidArgument("render_depth: invalid camera pose");
  DepthMap map;
  map.width = camera.width;
  map.height = camera.height;
  map.depth.assign(static_cast<std::size_t>(map.width) * map.height, DepthMap::kNoHit);

  const Mat3 rot = camera.world_to_camera();
  std::vector<Vec3> cam(mesh.vertices.size());
  for (std::size_t i = 0; i < cam.size(); ++i) cam[i] = rot * (mesh.vertices[i] - camera.position);

  const double cx = camera.cx();
  const double cy = camera.cy();
  for (const Face& face : mesh.faces) {
    const Vec3& p0 = cam[face[0]];
    const Vec3& p1 = cam[face[1]];
    const Vec3& p2 = cam[face[2]];
    if (p0.z() <= kNearPlane || p1.z() <= kNearPlane || p2.z() <= kNearPlane) continue;
    const double x0 = camera.focal * p0.x() / p0.z() + cx, y0 = camera.focal * p0.y() / p0.z() + cy;
    const double x1 = camera.focal * p1.x() / p1.z() + cx, y1 = camera.focal * p1.y() / p1.z() + cy;
    const double x2 = camera.focal * p2.x() / p2.z() + cx, y2 = camera.focal * p2.y() / p2.z() + cy;
    const double area = edge(x0, y0, x1, y1, x2, y2);
    if (area == 0.0 || !std::isfinite(area)) continue;

    // Pixel centers x + 0.5 inside [min, max] -> x in [ceil(min - 0.5), floor(max - 0.5)].
    const int xmin = std::max(0, static_cast<int>(std::ceil(std::min({x0, x1, x2}) - 0.5)));
    const int xmax = std::min(map.width - 1, static_cast<int>(std::floor(std::max({x0, x1, x2}) - 0.5)));
    const int ymin = std::max(0, static_cast<int>(std::ceil(std::min({y0, y1, y2}) - 0.5)));
    const int ymax = std::min(map.height - 1, static_cast<int>(std::floor(std::max({y0, y1, y2}) - 0.5)));
    const double inv_area = 1.0 / area;
    for (int py = ymin; py <= ymax; ++py) {
      const double sy = py + 0.5;
      for (int px = xmin; px <= xmax; ++px) {
        const double sx = px + 0.5;
        const double w0 = edge(x1, y1, x2, y2, sx, sy) * inv_area;
        const double w1 = edge(x2, y2, x0, y0, sx, sy) * inv_area;
        const double w2 = edge(x0, y0, x1, y1, sx, sy) * inv_area;
        if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
        // 1/z is affine in screen space.
        const double z = 1.0 / (w0 / p0.z() + w1 / p1.z() + w2 / p2.z());
        double& slot = map.depth[static_cast<std::size_t>(py) * map.width + px];
        if (z < slot) slot = z;
      }
    }
  }
  if (map.hit_count() == 0) throw NothingVisible("render_depth: no pixel covered by the mesh");
  return map;
}

PointCloud depth_to_cloud(const DepthMap& depth, const CameraPose& camera, std::size_t n,
                          Rng& rng) {
  if (n == 0) throw InvalidArgument("depth_to_cloud: n must be at least 1");
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < depth.depth.size(); ++i) {
    if (depth.depth[i] != DepthMap::kNoHit) hits.push_back(i);
  }
  if (hits.empty()) throw EmptyDepth("depth_to_cloud: depth map has no hit pixels");

  std::vector<std::size_t> chosen(n);
  if (hits.size() >= n) {
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + rng.index(hits.size() - i);
      std::swap(hits[i], hits[j]);
      chosen[i] = hits[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) chosen[i] = hits[rng.index(hits.size())];
  }

  const Mat3 cam_to_world = camera.world_to_camera().transpose();
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t pixel : chosen) {
    const int px = static_cast<int>(pixel % depth.width);
    const int py = static_cast<int>(pixel / depth.width);
    const double z = depth.depth[pixel];
    const Vec3 c((px + 0.5 - camera.cx()) / camera.focal * z,
                 (py + 0.5 - camera.cy()) / camera.focal * z, z);
    cloud.points.push_back(camera.position + cam_to_world * c);
  }
  return cloud;
}

PointCloud depth_to_cloud(const DepthMap& depth, const CameraPose& camera, std::size_t n,
                          std::uint64_t seed) {
  Rng rng(seed);
  return depth_to_cloud(depth, camera, n, rng);
}

CameraPose random_camera(Rng& rng, double r_min, double r_max) {
  if (!(r_min > 0.0) || !(r_max >= r_min)) {
    throw InvalidArgument("random_camera: need 0 < r_min <= r_max");
  }
  const Vec3 dir = rng.unit_vector();
  const double radius = rng.uniform(r_min, r_max);
  CameraPose cam;
  cam.position = radius * dir;
  cam.target = Vec3::Zero();
  cam.up = std::abs(dir.z()) > 0.99 ? Vec3::UnitY() : Vec3::UnitZ();
  return cam;
}

CameraPose random_camera(std::uint64_t seed, double r_min, double r_max) {
  Rng rng(seed);
  return random_camera(rng, r_min, r_max);
}

}  // namespace autosynth
