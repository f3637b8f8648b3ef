#include "tentpitch/errors.hpp"
#include "tentpitch/io.hpp"
#include "tentpitch/pitcher.hpp"
#include "tentpitch/verifier.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace tentpitch;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IndexArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

RawMesh raw_from_arrays(const DoubleArray& vertices, const IndexArray& elements, std::optional<std::vector<double>> speeds) {
  if (vertices.ndim() != 2 || elements.ndim() != 2) throw MeshError("vertices and elements must be 2-d arrays");
  RawMesh raw;
  raw.dim = static_cast<int>(vertices.shape(1));
  const auto v = vertices.unchecked<2>();
  for (py::ssize_t i = 0; i < v.shape(0); ++i) {
    raw.vertices.emplace_back();
    for (py::ssize_t k = 0; k < v.shape(1); ++k) raw.vertices.back().push_back(v(i, k));
  }
  const auto e = elements.unchecked<2>();
  for (py::ssize_t i = 0; i < e.shape(0); ++i) {
    raw.elements.emplace_back();
    for (py::ssize_t k = 0; k < e.shape(1); ++k) raw.elements.back().push_back(e(i, k));
  }
  if (speeds) raw.speeds = *speeds;
  return raw;
}

template <class T>
py::array_t<T> to_array(std::span<const T> values) {
  py::array_t<T> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

py::array_t<std::int64_t> element_array(const SpaceTimeMesh& mesh) {
  const auto n = static_cast<py::ssize_t>(mesh.dim() + 1);
  py::array_t<std::int64_t> out({static_cast<py::ssize_t>(mesh.element_count()), n});
  auto w = out.mutable_unchecked<2>();
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const auto ids = mesh.element_vertices(e);
    for (py::ssize_t k = 0; k < n; ++k) w(e, k) = ids[static_cast<std::size_t>(k)];
  }
  return out;
}

py::dict stats_dict(const MeshStats& s) {
  py::dict d;
  d["patches"] = s.patches;
  d["elements"] = s.elements;
  d["duration_min"] = s.duration_min;
  d["duration_max"] = s.duration_max;
  d["duration_mean"] = s.duration_mean;
  d["duration_ratio"] = s.duration_ratio;
  d["patch_size_histogram"] = s.patch_size_histogram;
  d["seconds"] = s.seconds;
  d["elements_per_second"] = s.elements_per_second;
  return d;
}

py::list report_list(const VerifyReport& report) {
  py::list checks;
  for (const auto& c : report.checks) {
    py::dict d;
    d["name"] = c.name;
    d["passed"] = c.passed;
    d["skipped"] = c.skipped;
    d["message"] = c.message;
    d["offenders"] = c.offenders;
    d["metrics"] = c.metrics;
    checks.append(d);
  }
  return checks;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tent pitching space-time mesh generator";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DegeneracyError>(m, "DegeneracyError", base.ptr());
  py::register_exception<MeshError>(m, "MeshError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());
  py::register_exception<StallError>(m, "StallError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());

  py::class_<GroundMesh>(m, "GroundMesh")
      .def(py::init([](const DoubleArray& vertices, const IndexArray& elements,
                       std::optional<std::vector<double>> speeds) {
             return GroundMesh::load(raw_from_arrays(vertices, elements, std::move(speeds)));
           }),
           py::arg("vertices"), py::arg("elements"), py::arg("speeds") = py::none())
      .def_static("read", [](const std::string& path) { return GroundMesh::load(read_mesh_file(path)); },
                  py::arg("path"))
      .def_property_readonly("dim", &GroundMesh::dim)
      .def_property_readonly("vertex_count", &GroundMesh::vertex_count)
      .def_property_readonly("element_count", &GroundMesh::element_count)
      .def("star", [](const GroundMesh& g, Index v) { return std::vector<Index>(g.star(v).begin(), g.star(v).end()); })
      .def("omega", [](const GroundMesh& g, double epsilon) { return precompute(g, epsilon).omega; },
           py::arg("epsilon") = kDefaultEpsilon)
      .def("to_json", [](const GroundMesh& g) { return write_json_mesh(to_raw(g)); });

  py::class_<SpaceTimeMesh>(m, "SpaceTimeMesh")
      .def_property_readonly("dim", &SpaceTimeMesh::dim)
      .def_property_readonly("vertex_count", &SpaceTimeMesh::vertex_count)
      .def_property_readonly("element_count", &SpaceTimeMesh::element_count)
      .def_property_readonly("patch_count", &SpaceTimeMesh::patch_count)
      .def_property_readonly("times", [](const SpaceTimeMesh& s) { return to_array(s.times()); })
      .def_property_readonly("vertex_ground", [](const SpaceTimeMesh& s) { return to_array(s.vertex_grounds()); })
      .def_property_readonly("elements", &element_array)
      .def("stats", [](const SpaceTimeMesh& s) { return stats_dict(stats(s)); })
      .def("to_vtk", &write_vtk)
      .def("to_json", &write_spacetime_json, py::arg("target_time"), py::arg("epsilon"));

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("mesh", &RunResult::mesh)
      .def_readonly("seconds", &RunResult::seconds)
      .def_property_readonly("lifts", [](const RunResult& r) {
        py::list out;
        for (const auto& l : r.trace.lifts)
          out.append(py::make_tuple(l.vertex, l.old_time, l.new_time, to_string(l.binding.kind)));
        return out;
      })
      .def("trace_json", [](const RunResult& r) { return write_trace_json(r.trace); });

  m.def(
      "pitch",
      [](const GroundMesh& ground, double target_time, double epsilon, const std::string& strategy,
         std::uint64_t seed, std::vector<double> initial_times) {
        if (strategy != "greedy" && strategy != "mis") throw ConfigError("strategy must be 'greedy' or 'mis'");
        const PitchConfig config(target_time, epsilon, strategy == "mis" ? Strategy::mis(seed) : Strategy::greedy());
        py::gil_scoped_release release;
        return run(ground, config, std::move(initial_times));
      },
      py::arg("ground"), py::arg("target_time"), py::arg("epsilon") = kDefaultEpsilon,
      py::arg("strategy") = "greedy", py::arg("seed") = 0, py::arg("initial_times") = std::vector<double>{});

  m.def(
      "verify",
      [](const RunResult& result, const GroundMesh& ground, double target_time, double epsilon, double sample_rate) {
        VerifyOptions options;
        options.oracle_sample_rate = sample_rate;
        const VerifyReport report = verify(result.mesh, ground, target_time, epsilon, options, result.trace);
        return py::make_tuple(report.passed(), report_list(report));
      },
      py::arg("result"), py::arg("ground"), py::arg("target_time"), py::arg("epsilon") = kDefaultEpsilon,
      py::arg("sample_rate") = 0.01);
}
