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

#include "autosynth/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "autosynth/errors.hpp"

namespace autosynth {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// Shortest decimal form that parses back to the same double.
void append_double(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

void append_le_double(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

void append_le_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// --- PLY -------------------------------------------------------------------

enum class PlyType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

std::optional<PlyType> ply_type(std::string_view name) {
  if (name == "char" || name == "int8") return PlyType::kInt8;
  if (name == "uchar" || name == "uint8") return PlyType::kUint8;
  if (name == "short" || name == "int16") return PlyType::kInt16;
  if (name == "ushort" || name == "uint16") return PlyType::kUint16;
  if (name == "int" || name == "int32") return PlyType::kInt32;
  if (name == "uint" || name == "uint32") return PlyType::kUint32;
  if (name == "float" || name == "float32") return PlyType::kFloat32;
  if (name == "double" || name == "float64") return PlyType::kFloat64;
  return std::nullopt;
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::kInt8:
    case PlyType::kUint8: return 1;
    case PlyType::kInt16:
    case PlyType::kUint16: return 2;
    case PlyType::kInt32:
    case PlyType::kUint32:
    case PlyType::kFloat32: return 4;
    case PlyType::kFloat64: return 8;
  }
  return 0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::kFloat64;
  bool is_list = false;
  PlyType count_type = PlyType::kUint8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

enum class PlyFormat { kAscii, kBinaryLittle, kBinaryBig };

// Sequential reader over the body of a PLY file.
class PlyBody {
 public:
  PlyBody(const std::string& data, std::size_t offset, PlyFormat format,
          const fs::path& path)
      : data_(data), pos_(offset), format_(format), path_(path) {}

  double read(PlyType type) {
    if (format_ == PlyFormat::kAscii) return read_ascii();
    const std::size_t n = ply_size(type);
    if (pos_ + n > data_.size()) fail("unexpected end of binary data");
    unsigned char raw[8];
    std::memcpy(raw, data_.data() + pos_, n);
    pos_ += n;
    if ((format_ == PlyFormat::kBinaryBig) == (std::endian::native == std::endian::little)) {
      std::reverse(raw, raw + n);
    }
    switch (type) {
      case PlyType::kInt8: return static_cast<double>(std::bit_cast<std::int8_t>(raw[0]));
      case PlyType::kUint8: return static_cast<double>(raw[0]);
      case PlyType::kInt16: return load<std::int16_t>(raw);
      case PlyType::kUint16: return load<std::uint16_t>(raw);
      case PlyType::kInt32: return load<std::int32_t>(raw);
      case PlyType::kUint32: return load<std::uint32_t>(raw);
      case PlyType::kFloat32: return load<float>(raw);
      case PlyType::kFloat64: return load<double>(raw);
    }
    return 0.0;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError("malformed PLY '" + path_.string() + "': " + what);
  }

 private:
  template <class T>
  static double load(const unsigned char* raw) {
    T v;
    std::memcpy(&v, raw, sizeof(T));
    return static_cast<double>(v);
  }

  double read_ascii() {
    while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    std::size_t end = pos_;
    while (end < data_.size() && !std::isspace(static_cast<unsigned char>(data_[end]))) ++end;
    if (end == pos_) fail("unexpected end of ascii data");
    double v;
    if (!parse_double(std::string_view(data_).substr(pos_, end - pos_), v)) {
      fail("bad number '" + data_.substr(pos_, end - pos_) + "'");
    }
    pos_ = end;
    return v;
  }

  const std::string& data_;
  std::size_t pos_;
  PlyFormat format_;
  const fs::path& path_;
};

struct PlyContents {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
};

PlyContents parse_ply(const fs::path& path) {
  const std::string data = read_file(path);
  auto header_fail = [&](const std::string& what) -> IoError {
    return IoError("malformed PLY header in '" + path.string() + "': " + what);
  };
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string_view {
    if (pos >= data.size()) throw header_fail("missing end_header");
    std::size_t end = data.find('\n', pos);
    if (end == std::string::npos) end = data.size();
    std::string_view line(data.data() + pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  if (next_line() != "ply") throw header_fail("missing 'ply' magic");
  std::optional<PlyFormat> format;
  std::vector<PlyElement> elements;
  for (;;) {
    const auto tokens = split_ws(next_line());
    if (tokens.empty()) continue;
    if (tokens[0] == "end_header") break;
    if (tokens[0] == "comment" || tokens[0] == "obj_info") continue;
    if (tokens[0] == "format") {
      if (tokens.size() < 2) throw header_fail("bad format line");
      if (tokens[1] == "ascii") format = PlyFormat::kAscii;
      else if (tokens[1] == "binary_little_endian") format = PlyFormat::kBinaryLittle;
      else if (tokens[1] == "binary_big_endian") format = PlyFormat::kBinaryBig;
      else throw header_fail("unknown format '" + std::string(tokens[1]) + "'");
    } else if (tokens[0] == "element") {
      if (tokens.size() != 3) throw header_fail("bad element line");
      PlyElement el;
      el.name = tokens[1];
      std::size_t count = 0;
      auto [p, ec] = std::from_chars(tokens[2].data(), tokens[2].data() + tokens[2].size(), count);
      if (ec != std::errc()) throw header_fail("bad element count");
      el.count = count;
      elements.push_back(std::move(el));
    } else if (tokens[0] == "property") {
      if (elements.empty()) throw header_fail("property before element");
      PlyProperty prop;
      if (tokens.size() == 5 && tokens[1] == "list") {
        auto ct = ply_type(tokens[2]);
        auto it = ply_type(tokens[3]);
        if (!ct || !it) throw header_fail("bad list property types");
        prop.is_list = true;
        prop.count_type = *ct;
        prop.type = *it;
        prop.name = tokens[4];
      } else if (tokens.size() == 3) {
        auto t = ply_type(tokens[1]);
        if (!t) throw header_fail("unknown property type '" + std::string(tokens[1]) + "'");
        prop.type = *t;
        prop.name = tokens[2];
      } else {
        throw header_fail("bad property line");
      }
      elements.back().properties.push_back(std::move(prop));
    } else {
      throw header_fail("unknown header keyword '" + std::string(tokens[0]) + "'");
    }
  }
  if (!format) throw header_fail("missing format line");

  PlyContents out;
  PlyBody body(data, pos, *format, path);
  for (const PlyElement& el : elements) {
    const bool is_vertex = el.name == "vertex";
    const bool is_face = el.name == "face";
    int xi = -1, yi = -1, zi = -1;
    for (std::size_t p = 0; p < el.properties.size(); ++p) {
      const auto& name = el.properties[p].name;
      if (name == "x") xi = static_cast<int>(p);
      if (name == "y") yi = static_cast<int>(p);
      if (name == "z") zi = static_cast<int>(p);
    }
    if (is_vertex && (xi < 0 || yi < 0 || zi < 0)) body.fail("vertex element lacks x/y/z");
    std::vector<double> scalars(el.properties.size());
    std::vector<std::uint32_t> polygon;
    for (std::size_t i = 0; i < el.count; ++i) {
      for (std::size_t p = 0; p < el.properties.size(); ++p) {
        const PlyProperty& prop = el.properties[p];
        if (!prop.is_list) {
          scalars[p] = body.read(prop.type);
          continue;
        }
        const double count = body.read(prop.count_type);
        if (count < 0) body.fail("negative list length");
        const bool indices = is_face && (prop.name == "vertex_indices" ||
                                         prop.name == "vertex_index");
        polygon.clear();
        for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
          const double v = body.read(prop.type);
          if (indices) {
            if (v < 0) body.fail("negative vertex index");
            polygon.push_back(static_cast<std::uint32_t>(v));
          }
        }
        if (indices) {
          for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
            out.faces.push_back({polygon[0], polygon[k], polygon[k + 1]});
          }
        }
      }
      if (is_vertex) out.vertices.emplace_back(scalars[xi], scalars[yi], scalars[zi]);
    }
  }
  for (const Face& f : out.faces) {
    for (auto idx : f) {
      if (idx >= out.vertices.size()) body.fail("face index out of range");
    }
  }
  return out;
}

std::string ply_header(std::size_t n_vertices, std::optional<std::size_t> n_faces) {
  std::string h =
      "ply\nformat binary_little_endian 1.0\n"
      "element vertex " + std::to_string(n_vertices) + "\n"
      "property double x\nproperty double y\nproperty double z\n";
  if (n_faces) {
    h += "element face " + std::to_string(*n_faces) + "\n"
         "property list uchar uint vertex_indices\n";
  }
  h += "end_header\n";
  return h;
}

std::string extension_of(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

void write_obj(const TriangleMesh& mesh, const fs::path& path) {
  std::string out;
  out.reserve(mesh.vertices.size() * 64 + mesh.faces.size() * 24);
  for (const Vec3& v : mesh.vertices) {
    out += "v ";
    append_double(out, v.x());
    out += ' ';
    append_double(out, v.y());
    out += ' ';
    append_double(out, v.z());
    out += '\n';
  }
  for (const Face& f : mesh.faces) {
    out += "f " + std::to_string(f[0] + 1) + ' ' + std::to_string(f[1] + 1) + ' ' +
           std::to_string(f[2] + 1) + '\n';
  }
  write_file(path, out);
}

TriangleMesh read_obj(const fs::path& path) {
  const std::string data = read_file(path);
  TriangleMesh mesh;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::vector<std::int64_t> polygon;
  auto fail = [&](const std::string& what) {
    return IoError("malformed OBJ '" + path.string() + "' line " +
                   std::to_string(line_no) + ": " + what);
  };
  while (pos < data.size()) {
    std::size_t end = data.find('\n', pos);
    if (end == std::string::npos) end = data.size();
    std::string_view line(data.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens[0] == "v") {
      if (tokens.size() < 4) throw fail("vertex needs three coordinates");
      Vec3 v;
      for (int i = 0; i < 3; ++i) {
        if (!parse_double(tokens[i + 1], v[i])) throw fail("bad coordinate");
      }
      mesh.vertices.push_back(v);
    } else if (tokens[0] == "f") {
      polygon.clear();
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        std::string_view ref = tokens[i].substr(0, tokens[i].find('/'));
        std::int64_t idx = 0;
        auto [p, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), idx);
        if (ec != std::errc() || idx == 0) throw fail("bad face index");
        idx = idx > 0 ? idx - 1 : static_cast<std::int64_t>(mesh.vertices.size()) + idx;
        if (idx < 0 || idx >= static_cast<std::int64_t>(mesh.vertices.size())) {
          throw fail("face index out of range");
        }
        polygon.push_back(idx);
      }
      if (polygon.size() < 3) throw fail("face needs at least three vertices");
      for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
        mesh.faces.push_back({static_cast<std::uint32_t>(polygon[0]),
                              static_cast<std::uint32_t>(polygon[k]),
                              static_cast<std::uint32_t>(polygon[k + 1])});
      }
    }
  }
  return mesh;
}

void write_ply(const TriangleMesh& mesh, const fs::path& path) {
  std::string out = ply_header(mesh.vertices.size(), mesh.faces.size());
  out.reserve(out.size() + mesh.vertices.size() * 24 + mesh.faces.size() * 13);
  for (const Vec3& v : mesh.vertices) {
    append_le_double(out, v.x());
    append_le_double(out, v.y());
    append_le_double(out, v.z());
  }
  for (const Face& f : mesh.faces) {
    out.push_back(3);
    for (auto idx : f) append_le_u32(out, idx);
  }
  write_file(path, out);
}

TriangleMesh read_ply_mesh(const fs::path& path) {
  PlyContents c = parse_ply(path);
  return TriangleMesh{std::move(c.vertices), std::move(c.faces)};
}

void write_ply(const PointCloud& cloud, const fs::path& path) {
  std::string out = ply_header(cloud.points.size(), std::nullopt);
  out.reserve(out.size() + cloud.points.size() * 24);
  for (const Vec3& p : cloud.points) {
    append_le_double(out, p.x());
    append_le_double(out, p.y());
    append_le_double(out, p.z());
  }
  write_file(path, out);
}

PointCloud read_ply_cloud(const fs::path& path) {
  return PointCloud{parse_ply(path).vertices};
}

void write_xyz(const PointCloud& cloud, const fs::path& path) {
  std::string out;
  out.reserve(cloud.points.size() * 64);
  for (const Vec3& p : cloud.points) {
    append_double(out, p.x());
    out += ' ';
    append_double(out, p.y());
    out += ' ';
    append_double(out, p.z());
    out += '\n';
  }
  write_file(path, out);
}

PointCloud read_xyz(const fs::path& path) {
  const std::string data = read_file(path);
  PointCloud cloud;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    std::size_t end = data.find('\n', pos);
    if (end == std::string::npos) end = data.size();
    const auto tokens = split_ws(std::string_view(data.data() + pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (tokens.empty()) continue;
    Vec3 p;
    if (tokens.size() != 3 || !parse_double(tokens[0], p.x()) ||
        !parse_double(tokens[1], p.y()) || !parse_double(tokens[2], p.z())) {
      throw IoError("malformed XYZ '" + path.string() + "' line " +
                    std::to_string(line_no));
    }
    cloud.points.push_back(p);
  }
  return cloud;
}

TriangleMesh read_mesh(const fs::path& path) {
  const std::string ext = extension_of(path);
  if (ext == ".obj") return read_obj(path);
  if (ext == ".ply") return read_ply_mesh(path);
  throw IoError("unsupported mesh format '" + path.string() + "' (expected .obj or .ply)");
}

void write_mesh(const TriangleMesh& mesh, const fs::path& path) {
  const std::string ext = extension_of(path);
  if (ext == ".obj") return write_obj(mesh, path);
  if (ext == ".ply") return write_ply(mesh, path);
  throw IoError("unsupported mesh format '" + path.string() + "' (expected .obj or .ply)");
}

PointCloud read_cloud(const fs::path& path) {
  const std::string ext = extension_of(path);
  if (ext == ".ply") return read_ply_cloud(path);
  if (ext == ".xyz") return read_xyz(path);
  throw IoError("unsupported cloud format '" + path.string() + "' (expected .ply or .xyz)");
}

void write_cloud(const PointCloud& cloud, const fs::path& path) {
  const std::string ext = extension_of(path);
  if (ext == ".ply") return write_ply(cloud, path);
  if (ext == ".xyz") return write_xyz(cloud, path);
  throw IoError("unsupported cloud format '" + path.string() + "' (expected .ply or .xyz)");
}

}  // namespace autosynth
