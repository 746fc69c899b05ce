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


#include "autosynth/datasetgen.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "autosynth/errors.hpp"
#include "autosynth/mesh_io.hpp"
#include "autosynth/meshing.hpp"
#include "autosynth/parallel.hpp"

namespace autosynth {

namespace fs = std::filesystem;
using nlohmann::json;

bool ObjectSpec::is_valid() const {
  if (components.empty()) return false;
  for (const auto& c : components) {
    if (!c.transform.is_valid() || !c.plane.is_valid()) return false;
  }
  return true;
}

SdfNode component_sdf(const ComponentSpec& component) {
  return SdfNode::truncated(
      SdfNode::transformed(SdfNode::primitive(canonical_primitive(component.kind)),
                           component.transform),
      component.plane);
}

SdfNode object_sdf(const ObjectSpec& spec) {
  std::vector<SdfNode> children;
  children.reserve(spec.components.size());
  for (const auto& c : spec.components) children.push_back(component_sdf(c));
  return SdfNode::union_of(std::move(children));
}

namespace {

AffineTransform draw_transform(const GenerationRanges& ranges, Rng& rng) {
  AffineTransform t;
  const Vec3 axis = rng.unit_vector();
  const double angle = rng.uniform(0.0, ranges.max_rotation);
  t.rotation = axis_angle_rotation(axis, angle);
  for (int i = 0; i < 3; ++i) t.translation[i] = rng.uniform(-ranges.translation, ranges.translation);
  t.alpha = rng.uniform(ranges.alpha.lo, ranges.alpha.hi);
  for (int i = 0; i < 3; ++i) t.shear[i] = rng.uniform(-ranges.shear[i], ranges.shear[i]);
  for (int i = 0; i < 3; ++i) t.stretch[i] = rng.uniform(ranges.stretch[i].lo, ranges.stretch[i].hi);
  return t;
}

struct DrawnComponent {
  ComponentSpec spec;
  TriangleMesh mesh;
};

DrawnComponent draw_component(const GenerationRanges& ranges, Rng& rng) {
  for (int attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
    ComponentSpec c;
    c.kind = kAllPrimitiveKinds[rng.index(kNumPrimitiveKinds)];
    c.transform = draw_transform(ranges, rng);
    const Vec3 normal = rng.unit_vector();
    const double cut = rng.uniform(0.0, ranges.plane_offset);
    try {
      TriangleMesh placed = transform_mesh(canonical_mesh(c.kind), c.transform);
      const Vec3 center = c.transform.apply_inverse(Vec3::Zero());
      double radius = 0.0;
      for (const Vec3& v : placed.vertices) radius = std::max(radius, (v - center).norm());
      c.plane.normal = normal;
      c.plane.anchor = center + normal * (radius * (1.0 - cut));
      TriangleMesh clipped = clip_mesh(placed, c.plane);
      return {std::move(c), std::move(clipped)};
    } catch (const EmptySurface&) {
    } catch (const SingularTransform&) {
    }
  }
  throw RetryExhausted("object generation: " + std::to_string(kMaxGenerationRetries) +
                       " consecutive draws produced an empty component");
}

}  // namespace

GeneratedObject generate_object(const GenerationRanges& ranges, Rng& rng) {
  if (!ranges.is_valid()) throw InvalidArgument("generate_object: invalid ranges");
  GeneratedObject obj;
  std::vector<TriangleMesh> parts;
  parts.reserve(ranges.primitive_count);
  obj.component_offsets.push_back(0);
  for (int i = 0; i < ranges.primitive_count; ++i) {
    DrawnComponent c = draw_component(ranges, rng);
    obj.spec.components.push_back(std::move(c.spec));
    obj.component_offsets.push_back(obj.component_offsets.back() + c.mesh.vertices.size());
    parts.push_back(std::move(c.mesh));
  }
  TriangleMesh raw = merge_meshes(parts);
  const AxisBox box = bounding_box(raw.vertices);
  obj.center = 0.5 * (box.min + box.max);
  obj.mesh = normalize_mesh(raw);
  double max_norm = 0.0;
  for (const Vec3& v : raw.vertices) max_norm = std::max(max_norm, (v - obj.center).norm());
  obj.scale = 1.0 / max_norm;
  return obj;
}

GeneratedObject generate_object(const GenerationRanges& ranges, std::uint64_t seed) {
  Rng rng(seed);
  return generate_object(ranges, rng);
}

Dataset generate_dataset(const Policy& policy, std::size_t n_objects, std::size_t points,
                         std::uint64_t seed, const GenerateOptions& options) {
  if (n_objects < 1) throw InvalidArgument("generate_dataset: n_objects must be at least 1");
  if (points < 8) throw InvalidArgument("generate_dataset: points per cloud must be at least 8");
  const GenerationRanges ranges = to_ranges(policy);
  Dataset d;
  d.name = "policy-" + policy.digits();
  d.seed = seed;
  d.policy = policy;
  d.points_per_cloud = points;
  d.entries.resize(n_objects);
  parallel_for(n_objects, options.threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    try {
      GeneratedObject obj = generate_object(ranges, rng);
      DatasetEntry& e = d.entries[i];
      e.cloud = sample_surface(obj.mesh, points, rng);
      e.spec = std::move(obj.spec);
      if (options.keep_meshes) e.mesh = std::move(obj.mesh);
    } catch (const RetryExhausted& err) {
      throw RetryExhausted("object " + std::to_string(i) + ": " + err.what());
    }
  });
  return d;
}

TriangleMesh demo_target_mesh() {
  struct Part {
    PrimitiveKind kind;
    Vec3 size;  // per-axis scale of the canonical primitive
    Vec3 center;
    double pitch;  // rotation about y
  };
  // A squat four-legged critter: body, head, ears, tail ring and a plinth.
  const Part parts[] = {
      {PrimitiveKind::kSphere, {0.9, 0.6, 0.55}, {0.0, 0.0, 0.0}, 0.0},
      {PrimitiveKind::kSphere, {0.38, 0.38, 0.38}, {0.85, 0.0, 0.45}, 0.0},
      {PrimitiveKind::kCylinder, {0.15, 0.1, 0.35}, {0.8, 0.18, 0.95}, -0.3},
      {PrimitiveKind::kCylinder, {0.15, 0.1, 0.35}, {0.8, -0.18, 0.95}, -0.3},
      {PrimitiveKind::kTorus, {0.25, 0.25, 0.25}, {-0.95, 0.0, 0.15}, 1.2},
      {PrimitiveKind::kCuboid, {1.6, 1.1, 0.15}, {0.0, 0.0, -0.6}, 0.0},
  };
  std::vector<TriangleMesh> meshes;
  for (const Part& part : parts) {
    AffineTransform t;
    t.rotation = axis_angle_rotation(Vec3::UnitY(), part.pitch);
    t.stretch = part.size.cwiseInverse();
    t.translation = t.linear() * part.center;
    meshes.push_back(transform_mesh(canonical_mesh(part.kind), t));
  }
  return normalize_mesh(merge_meshes(meshes));
}

Dataset build_target_dataset(const TriangleMesh& mesh, std::size_t n_aug, std::size_t points,
                             std::uint64_t seed, const GenerateOptions& options) {
  if (n_aug < 1) throw InvalidArgument("build_target_dataset: n_aug must be at least 1");
  if (points < 1) throw InvalidArgument("build_target_dataset: points must be at least 1");
  if (!mesh.is_valid()) throw InvalidArgument("build_target_dataset: invalid mesh");
  const TriangleMesh normalized = normalize_mesh(mesh);
  Dataset d;
  d.name = "target";
  d.seed = seed;
  d.points_per_cloud = points;
  d.entries.resize(n_aug);
  parallel_for(n_aug, options.threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    DatasetEntry& e = d.entries[i];
    e.rotation = random_rotation(rng);
    TriangleMesh rotated = rigid_transform_mesh(normalized, e.rotation, Vec3::Zero());
    e.cloud = sample_surface(rotated, points, rng);
    if (options.keep_meshes) e.mesh = std::move(rotated);
  });
  return d;
}

std::string dataset_digest(const Dataset& dataset) {
  std::uint64_t h = fnv1a64(&dataset.seed, sizeof dataset.seed);
  const auto mix = [&](const void* data, std::size_t size) { h = fnv1a64(data, size, h); };
  for (const DatasetEntry& e : dataset.entries) {
    for (const Vec3& p : e.cloud.points) mix(p.data(), 3 * sizeof(double));
    if (e.mesh) {
      for (const Vec3& v : e.mesh->vertices) mix(v.data(), 3 * sizeof(double));
      if (!e.mesh->faces.empty()) mix(e.mesh->faces.data(), e.mesh->faces.size() * sizeof(Face));
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json mat_json(const Mat3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}

Vec3 json_vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InvalidArgument("expected a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Mat3 json_mat(const json& j) {
  if (!j.is_array() || j.size() != 9) throw InvalidArgument("expected a 3x3 matrix");
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = j[3 * r + c].get<double>();
  return m;
}

json spec_json(const ObjectSpec& spec) {
  json comps = json::array();
  for (const auto& c : spec.components) {
    comps.push_back({{"kind", std::string(to_string(c.kind))},
                     {"alpha", c.transform.alpha},
                     {"rotation", mat_json(c.transform.rotation)},
                     {"shear", vec_json(c.transform.shear)},
                     {"stretch", vec_json(c.transform.stretch)},
                     {"translation", vec_json(c.transform.translation)},
                     {"plane_anchor", vec_json(c.plane.anchor)},
                     {"plane_normal", vec_json(c.plane.normal)}});
  }
  return comps;
}

ObjectSpec json_spec(const json& j) {
  ObjectSpec spec;
  for (const auto& c : j) {
    ComponentSpec comp;
    const auto kind = primitive_kind_from_string(c.at("kind").get<std::string>());
    if (!kind) throw InvalidArgument("unknown primitive kind " + c.at("kind").dump());
    comp.kind = *kind;
    comp.transform.alpha = c.at("alpha").get<double>();
    comp.transform.rotation = json_mat(c.at("rotation"));
    comp.transform.shear = json_vec(c.at("shear"));
    comp.transform.stretch = json_vec(c.at("stretch"));
    comp.transform.translation = json_vec(c.at("translation"));
    comp.plane.anchor = json_vec(c.at("plane_anchor"));
    comp.plane.normal = json_vec(c.at("plane_normal"));
    spec.components.push_back(std::move(comp));
  }
  return spec;
}

std::string entry_name(const char* prefix, std::size_t i, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%05zu", prefix, i);
  return buf + ext;
}

void check_format(const ExportFormat& format) {
  if (format.mesh_extension != ".obj" && format.mesh_extension != ".ply") {
    throw InvalidArgument("mesh format must be .obj or .ply");
  }
  if (format.cloud_extension != ".ply" && format.cloud_extension != ".xyz") {
    throw InvalidArgument("cloud format must be .ply or .xyz");
  }
}

}  // namespace

std::string manifest_json(const Dataset& dataset, const ExportFormat& format) {
  check_format(format);
  json m;
  m["version"] = 1;
  m["name"] = dataset.name;
  m["seed"] = dataset.seed;
  m["points_per_cloud"] = dataset.points_per_cloud;
  if (dataset.policy) {
    m["policy"] = json::array();
    for (auto l : dataset.policy->labels) m["policy"].push_back(static_cast<int>(l));
  } else {
    m["policy"] = nullptr;
  }
  json entries = json::array();
  for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
    const DatasetEntry& e = dataset.entries[i];
    json je;
    je["cloud"] = entry_name("cloud", i, format.cloud_extension);
    je["mesh"] = e.mesh ? json(entry_name("obj", i, format.mesh_extension)) : json(nullptr);
    je["spec"] = e.spec ? spec_json(*e.spec) : json(nullptr);
    je["rotation"] = mat_json(e.rotation);
    entries.push_back(std::move(je));
  }
  m["entries"] = std::move(entries);
  return m.dump(2) + "\n";
}

fs::path export_dataset(const Dataset& dataset, const fs::path& directory,
                        const ExportFormat& format) {
  check_format(format);
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory '" + directory.string() + "': " + ec.message());
  for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
    const DatasetEntry& e = dataset.entries[i];
    write_cloud(e.cloud, directory / entry_name("cloud", i, format.cloud_extension));
    if (e.mesh) write_mesh(*e.mesh, directory / entry_name("obj", i, format.mesh_extension));
  }
  const fs::path manifest = directory / "manifest.json";
  std::ofstream out(manifest, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + manifest.string() + "' for writing");
  out << manifest_json(dataset, format);
  if (!out) throw IoError("write failed for '" + manifest.string() + "'");
  return manifest;
}

Dataset import_dataset(const fs::path& manifest) {
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw IoError("cannot open '" + manifest.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  const fs::path dir = manifest.parent_path();
  try {
    const json m = json::parse(ss.str());
    if (m.at("version").get<int>() != 1) throw InvalidArgument("unsupported manifest version");
    Dataset d;
    d.name = m.at("name").get<std::string>();
    d.seed = m.at("seed").get<std::uint64_t>();
    d.points_per_cloud = m.at("points_per_cloud").get<std::size_t>();
    if (!m.at("policy").is_null()) {
      Policy p;
      const auto& labels = m.at("policy");
      if (labels.size() != kPolicySize) throw InvalidArgument("manifest policy needs 11 labels");
      for (std::size_t i = 0; i < kPolicySize; ++i) p.labels[i] = labels[i].get<std::uint8_t>();
      if (!p.is_valid()) throw InvalidArgument("manifest policy labels out of range");
      d.policy = p;
    }
    for (const auto& je : m.at("entries")) {
      DatasetEntry e;
      e.cloud = read_cloud(dir / je.at("cloud").get<std::string>());
      if (e.cloud.size() != d.points_per_cloud) {
        throw SizeMismatch("cloud '" + je.at("cloud").get<std::string>() + "' has " +
                           std::to_string(e.cloud.size()) + " points, manifest says " +
                           std::to_string(d.points_per_cloud));
      }
      if (!je.at("mesh").is_null()) e.mesh = read_mesh(dir / je.at("mesh").get<std::string>());
      if (!je.at("spec").is_null()) e.spec = json_spec(je.at("spec"));
      e.rotation = json_mat(je.at("rotation"));
      d.entries.push_back(std::move(e));
    }
    return d;
  } catch (const json::exception& e) {
    throw IoError("malformed manifest '" + manifest.string() + "': " + e.what());
  } catch (const InvalidArgument& e) {
    throw IoError("malformed manifest '" + manifest.string() + "': " + e.what());
  }
}

RegistrationPair render_pair(const DatasetEntry& entry, std::uint64_t seed) {
  if (!entry.mesh) throw InvalidArgument("render_pair: entry has no mesh");
  const std::size_t n = std::max<std::size_t>(entry.cloud.size(), 1);
  Rng rng(seed);
  RegistrationPair pair;
  pair.source = sample_surface(*entry.mesh, n, rng);
  pair.rotation = random_rotation(rng);
  for (int i = 0; i < 3; ++i) pair.translation[i] = rng.uniform(-0.3, 0.3);
  const TriangleMesh posed = rigid_transform_mesh(*entry.mesh, pair.rotation, pair.translation);
  pair.camera = random_camera(rng);
  const DepthMap depth = render_depth(posed, pair.camera);
  pair.target = depth_to_cloud(depth, pair.camera, n, rng);
  return pair;
}

}  // namespace autosynth
