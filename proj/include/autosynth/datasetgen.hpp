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


// Expands a policy into a synthetic dataset of composed objects, and builds
// the rotated target set from a reference mesh.

#ifndef AUTOSYNTH_DATASETGEN_HPP_
#define AUTOSYNTH_DATASETGEN_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "autosynth/geometry.hpp"
#include "autosynth/mesh.hpp"
#include "autosynth/policy.hpp"
#include "autosynth/rng.hpp"
#include "autosynth/sampling.hpp"

namespace autosynth {

inline constexpr int kMaxGenerationRetries = 10;
inline constexpr std::size_t kDefaultObjectCount = 400;
inline constexpr std::size_t kDefaultPointsPerCloud = 256;
inline constexpr std::size_t kDefaultTargetAugmentations = 100;

struct ComponentSpec {
  PrimitiveKind kind = PrimitiveKind::kSphere;
  AffineTransform transform;
  Plane plane;

  bool operator==(const ComponentSpec&) const = default;
};

struct ObjectSpec {
  std::vector<ComponentSpec> components;

  bool is_valid() const;
  bool operator==(const ObjectSpec&) const = default;
};

// Truncated, transformed primitive of one component.
SdfNode component_sdf(const ComponentSpec& component);
// Union over the components. Describes the mesh before normalization.
SdfNode object_sdf(const ObjectSpec& spec);

struct GeneratedObject {
  ObjectSpec spec;
  TriangleMesh mesh;  // normalized
  // normalized = (raw - center) * scale
  Vec3 center = Vec3::Zero();
  double scale = 1.0;
  // Vertices of component c are [component_offsets[c], component_offsets[c+1]).
  std::vector<std::size_t> component_offsets;

  Vec3 to_raw(const Vec3& normalized) const { return normalized / scale + center; }
};

// Draws ranges.primitive_count components. Each one gets a uniform kind, a
// transform sampled inside the ranges, and a cutting plane whose normal is
// uniform and whose distance from the component center is R * (1 - f), with
// R the component's bounding radius and f uniform in [0, plane_offset]. A
// component clipped away entirely is redrawn; RetryExhausted after 10
// consecutive failures.
GeneratedObject generate_object(const GenerationRanges& ranges, Rng& rng);
GeneratedObject generate_object(const GenerationRanges& ranges, std::uint64_t seed);

struct DatasetEntry {
  std::optional<TriangleMesh> mesh;  // normalized
  PointCloud cloud;
  std::optional<ObjectSpec> spec;
  Mat3 rotation = Mat3::Identity();  // augmentation applied to target entries

  bool operator==(const DatasetEntry&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<DatasetEntry> entries;
  std::uint64_t seed = 0;
  std::optional<Policy> policy;
  std::size_t points_per_cloud = 0;

  std::size_t size() const { return entries.size(); }
  bool operator==(const Dataset&) const = default;
};

struct GenerateOptions {
  int threads = 0;  // 0: resolve_threads default
  // Dropping meshes keeps memory flat during search; clouds are all the
  // surrogate needs.
  bool keep_meshes = true;
};

// Object i uses the stream derive_seed(seed, i), so the result does not depend
// on the thread count. RetryExhausted carries the failing index.
Dataset generate_dataset(const Policy& policy, std::size_t n_objects, std::size_t points,
                         std::uint64_t seed, const GenerateOptions& options = {});

// Normalizes the mesh and adds n_aug copies under independent random
// rotations, each with a fresh surface sampling.
Dataset build_target_dataset(const TriangleMesh& mesh, std::size_t n_aug, std::size_t points,
                             std::uint64_t seed, const GenerateOptions& options = {});

// Small composite used as the built-in search target, standing in for an
// external reference scan. Normalized.
TriangleMesh demo_target_mesh();

// Hex FNV-1a over every cloud coordinate, mesh and seed.
std::string dataset_digest(const Dataset& dataset);

struct ExportFormat {
  std::string mesh_extension = ".obj";   // .obj or .ply
  std::string cloud_extension = ".ply";  // .ply or .xyz
};

// Writes obj_%05d.<ext>, cloud_%05d.<ext> and manifest.json into directory
// (created if missing). Returns the manifest path.
std::filesystem::path export_dataset(const Dataset& dataset, const std::filesystem::path& directory,
                                     const ExportFormat& format = {});
std::string manifest_json(const Dataset& dataset, const ExportFormat& format = {});
Dataset import_dataset(const std::filesystem::path& manifest);

struct RegistrationPair {
  PointCloud source;
  PointCloud target;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  CameraPose camera;
};

// Source: surface sampling of the entry mesh. Target: depth view of the mesh
// posed by (rotation, translation) from a random camera. Uses the entry's
// cloud size for both.
RegistrationPair render_pair(const DatasetEntry& entry, std::uint64_t seed);

}  // namespace autosynth

#endif  // AUTOSYNTH_DATASETGEN_HPP_
