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

// OBJ / PLY / XYZ readers and writers. Writers emit full-precision values so
// reading back reproduces the doubles exactly; binary PLY stores float64
// little-endian. The PLY reader also accepts ascii and big-endian files with
// arbitrary scalar types and extra properties (e.g. scanned meshes).

#ifndef AUTOSYNTH_MESH_IO_HPP_
#define AUTOSYNTH_MESH_IO_HPP_

#include <filesystem>

#include "autosynth/mesh.hpp"

namespace autosynth {

void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path);
TriangleMesh read_obj(const std::filesystem::path& path);

void write_ply(const TriangleMesh& mesh, const std::filesystem::path& path);
TriangleMesh read_ply_mesh(const std::filesystem::path& path);

void write_ply(const PointCloud& cloud, const std::filesystem::path& path);
PointCloud read_ply_cloud(const std::filesystem::path& path);

void write_xyz(const PointCloud& cloud, const std::filesystem::path& path);
PointCloud read_xyz(const std::filesystem::path& path);

// Dispatches on the extension (.obj / .ply).
TriangleMesh read_mesh(const std::filesystem::path& path);
void write_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);
// Dispatches on the extension (.ply / .xyz).
PointCloud read_cloud(const std::filesystem::path& path);
void write_cloud(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace autosynth

#endif  // AUTOSYNTH_MESH_IO_HPP_
