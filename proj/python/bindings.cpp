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


#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "autosynth/cli.hpp"
#include "autosynth/datasetgen.hpp"
#include "autosynth/evolution.hpp"
#include "autosynth/meshing.hpp"
#include "autosynth/policy.hpp"
#include "autosynth/sampling.hpp"
#include "autosynth/surrogate.hpp"

namespace py = pybind11;
using namespace autosynth;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const std::vector<Vec3>& pts) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int c = 0; c < 3; ++c) v(static_cast<py::ssize_t>(i), c) = pts[i][c];
  }
  return out;
}

std::vector<Vec3> to_points(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw InvalidArgument("expected an (n, 3) array");
  auto v = a.unchecked<2>();
  std::vector<Vec3> pts(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) pts[static_cast<std::size_t>(i)] = Vec3(v(i, 0), v(i, 1), v(i, 2));
  return pts;
}

PointCloud to_cloud(const Array& a) { return PointCloud{to_points(a)}; }

py::tuple mesh_tuple(const TriangleMesh& m) {
  py::array_t<std::uint32_t> faces({static_cast<py::ssize_t>(m.faces.size()), py::ssize_t{3}});
  auto f = faces.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    for (int c = 0; c < 3; ++c) f(static_cast<py::ssize_t>(i), c) = m.faces[i][c];
  }
  return py::make_tuple(to_array(m.vertices), faces);
}

TriangleMesh to_mesh(const Array& vertices, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& faces) {
  TriangleMesh m;
  m.vertices = to_points(vertices);
  if (faces.ndim() != 2 || faces.shape(1) != 3) throw InvalidArgument("faces: expected an (m, 3) array");
  auto f = faces.unchecked<2>();
  for (py::ssize_t i = 0; i < faces.shape(0); ++i) {
    Face face;
    for (int c = 0; c < 3; ++c) {
      if (f(i, c) < 0 || static_cast<std::size_t>(f(i, c)) >= m.vertices.size()) {
        throw InvalidArgument("faces: vertex index out of range");
      }
      face[c] = static_cast<std::uint32_t>(f(i, c));
    }
    m.faces.push_back(face);
  }
  return m;
}

PrimitiveKind kind_arg(const std::string& name) {
  if (auto k = primitive_kind_from_string(name)) return *k;
  throw InvalidArgument("unknown primitive kind '" + name + "'");
}

Policy policy_from_labels(const std::vector<int>& labels) {
  if (labels.size() != kPolicySize) throw InvalidArgument("a policy has 11 labels");
  Policy p;
  for (std::size_t i = 0; i < kPolicySize; ++i) {
    if (labels[i] < 0 || labels[i] >= kNumLabels) throw InvalidArgument("labels must be in 0..8");
    p.labels[i] = static_cast<std::uint8_t>(labels[i]);
  }
  return p;
}

py::dict ranges_dict(const GenerationRanges& r) {
  py::dict d;
  d["max_rotation"] = r.max_rotation;
  d["translation"] = r.translation;
  d["alpha"] = py::make_tuple(r.alpha.lo, r.alpha.hi);
  d["shear"] = r.shear;
  py::list stretch;
  for (const auto& s : r.stretch) stretch.append(py::make_tuple(s.lo, s.hi));
  d["stretch"] = stretch;
  d["primitive_count"] = r.primitive_count;
  d["plane_offset"] = r.plane_offset;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Procedural shape synthesis and evolutionary policy search";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<SizeMismatch>(m, "SizeMismatch", error.ptr());
  py::register_exception<ShapeMismatch>(m, "ShapeMismatch", error.ptr());
  py::register_exception<NonFinite>(m, "NonFinite", error.ptr());
  py::register_exception<RetryExhausted>(m, "RetryExhausted", error.ptr());
  py::register_exception<EmptySurface>(m, "EmptySurface", error.ptr());

  m.def("search_space_size", &search_space_size);

  py::class_<Policy>(m, "Policy")
      .def(py::init([](const std::vector<int>& labels) { return policy_from_labels(labels); }),
           py::arg("labels"))
      .def_property_readonly("labels",
                             [](const Policy& p) { return std::vector<int>(p.labels.begin(), p.labels.end()); })
      .def("digits", &Policy::digits)
      .def("to_json", &Policy::to_json)
      .def_static("from_json", &Policy::from_json)
      .def("index", &Policy::index)
      .def_static("from_index", &Policy::from_index)
      .def_static("random", [](std::uint64_t seed) {
        Rng rng(seed);
        return random_policy(rng);
      })
      .def_static("full_range", &full_range_policy)
      .def("mutate", [](const Policy& p, std::uint64_t seed) {
        Rng rng(seed);
        return mutate(p, rng);
      }, py::arg("seed"))
      .def("ranges", [](const Policy& p) { return ranges_dict(to_ranges(p)); })
      .def("hash", &policy_hash)
      .def(py::self == py::self)
      .def("__hash__", [](const Policy& p) { return p.index(); })
      .def("__repr__", [](const Policy& p) { return "Policy('" + p.digits() + "')"; });

  m.def("chamfer", [](const Array& x, const Array& y) { return chamfer(to_cloud(x), to_cloud(y)); },
        py::arg("x"), py::arg("y"));

  m.def("primitive_sdf",
        [](const std::string& kind, const Array& points) {
          const SdfNode node = SdfNode::primitive(canonical_primitive(kind_arg(kind)));
          const auto pts = to_points(points);
          std::vector<double> values(pts.size());
          for (std::size_t i = 0; i < pts.size(); ++i) values[i] = eval_sdf(node, pts[i]);
          return py::array_t<double>(std::vector<py::ssize_t>{static_cast<py::ssize_t>(values.size())}, values.data());
        },
        py::arg("kind"), py::arg("points"));

  m.def("canonical_mesh", [](const std::string& kind) { return mesh_tuple(canonical_mesh(kind_arg(kind))); },
        py::arg("kind"));
  m.def("demo_target_mesh", [] { return mesh_tuple(demo_target_mesh()); });
  m.def("sample_surface",
        [](const Array& vertices, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& faces,
           std::size_t n, std::uint64_t seed) {
          return to_array(sample_surface(to_mesh(vertices, faces), n, seed).points);
        },
        py::arg("vertices"), py::arg("faces"), py::arg("n"), py::arg("seed"));

  m.def("generate_dataset",
        [](const Policy& policy, std::size_t n, std::size_t points, std::uint64_t seed, int threads) {
          Dataset d;
          {
            py::gil_scoped_release release;
            d = generate_dataset(policy, n, points, seed, {threads, true});
          }
          py::list clouds, meshes;
          for (const auto& e : d.entries) {
            clouds.append(to_array(e.cloud.points));
            meshes.append(mesh_tuple(*e.mesh));
          }
          py::dict out;
          out["clouds"] = clouds;
          out["meshes"] = meshes;
          out["digest"] = dataset_digest(d);
          return out;
        },
        py::arg("policy"), py::arg("n"), py::arg("points") = kDefaultPointsPerCloud, py::arg("seed") = 0,
        py::arg("threads") = 1);

  m.def("run_search",
        [](const std::function<double(const Policy&)>& evaluator, std::size_t population, std::size_t trials,
           std::uint64_t seed) {
          const SearchResult r = run_search(SearchConfig{population, trials, seed}, evaluator);
          py::list history;
          for (const auto& h : r.history) {
            py::dict row;
            row["trial"] = h.trial;
            row["parent"] = h.parent;
            row["child"] = h.child;
            row["child_score"] = h.child_score;
            row["best_score"] = h.best_score;
            history.append(row);
          }
          py::dict out;
          out["best_policy"] = r.best.policy;
          out["best_score"] = r.best.score;
          out["history"] = history;
          out["history_csv"] = history_csv(r.history);
          return out;
        },
        py::arg("evaluator"), py::arg("population") = 32, py::arg("trials") = 1000, py::arg("seed") = 0);

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          int status;
          {
            py::gil_scoped_release release;
            status = run_cli(args, out, err);
          }
          return py::make_tuple(status, out.str(), err.str());
        },
        py::arg("args"));
}
