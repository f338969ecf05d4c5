#include "roughweyl/errors.hpp"
#include "roughweyl/mesh.hpp"
#include "roughweyl/runner.hpp"
#include "roughweyl/specs.hpp"
#include "roughweyl/spectral.hpp"
#include "roughweyl/version.hpp"
#include "roughweyl/weyl.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace roughweyl;

namespace {

SolveOptions options(const std::string& method, std::uint64_t seed) {
  SolveOptions o;
  if (method == "dense") o.method = SolverMethod::Dense;
  else if (method == "sparse") o.method = SolverMethod::Sparse;
  else if (method == "auto") o.method = SolverMethod::Auto;
  else throw ConfigError("method: must be auto, dense or sparse");
  o.seed = seed;
  return o;
}

Pencil pencil(const Mesh& m, const std::string& metric, const std::string& weight, const std::string& boundary) {
  return assemble(m, parse_metric_spec(metric), parse_weight_spec(weight), parse_boundary_spec(boundary));
}

} // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Weighted P1 eigenproblems on rough Riemannian surfaces";
  mod.attr("__version__") = kVersion;

  // Translators registered later are tried first, so the base class goes first.
  const py::handle base = py::register_exception<Error>(mod, "Error").ptr();
  py::register_exception<ConfigError>(mod, "ConfigError", base);
  py::register_exception<ModelingError>(mod, "ModelingError", base);
  py::register_exception<MeshError>(mod, "MeshError", base);
  py::register_exception<SolverError>(mod, "SolverError", base);

  py::class_<Mesh>(mod, "Mesh")
      .def_property_readonly("vertices",
                             [](const Mesh& m) {
                               std::vector<std::pair<double, double>> v;
                               for (const auto& p : m.vertices) v.emplace_back(p.x(), p.y());
                               return v;
                             })
      .def_property_readonly("triangles", [](const Mesh& m) { return m.triangles; })
      .def_property_readonly("boundary_tags", &Mesh::tags)
      .def_readonly("level", &Mesh::level)
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_triangles", &Mesh::num_triangles)
      .def("area", &Mesh::total_area)
      .def("validate", [](const Mesh& m) { return validate(m); })
      .def("to_text",
           [](const Mesh& m) {
             std::ostringstream os;
             write_mesh(m, os);
             return os.str();
           })
      .def("__repr__", [](const Mesh& m) {
        return "<Mesh " + std::to_string(m.num_vertices()) + " vertices, " + std::to_string(m.num_triangles()) +
               " triangles, level " + std::to_string(m.level) + ">";
      });

  mod.def(
      "unit_square",
      [](int n, bool mirrored) {
        return generate_unit_square(n, mirrored ? DiagonalPattern::Mirrored : DiagonalPattern::Uniform);
      },
      py::arg("n"), py::arg("mirrored") = false, "Structured mesh of [0,1]^2 with 2n^2 triangles.");
  mod.def("disk", &generate_disk, py::arg("rings"), "Ring mesh of the unit disk with the center as a vertex.");
  mod.def(
      "refine", [](const Mesh& m, int times) { return refine_uniform(m, times); }, py::arg("mesh"),
      py::arg("times") = 1);
  mod.def(
      "mesh_from_text",
      [](const std::string& text) {
        std::istringstream is(text);
        return read_mesh(is);
      },
      py::arg("text"));

  mod.def(
      "solve_weighted",
      [](const Mesh& m, const std::string& metric, const std::string& weight, const std::string& boundary, double t,
         int k, const std::string& method, std::uint64_t seed) {
        const Pencil p = pencil(m, metric, weight, boundary);
        const Spectrum s = solve_weighted(p, t, k, options(method, seed));
        py::dict d;
        d["plus"] = s.pos;
        d["minus"] = s.neg;
        d["method"] = s.meta.method;
        d["constrained"] = s.meta.constrained;
        d["working_dim"] = s.meta.working_dim;
        d["tau"] = p.tau;
        return d;
      },
      py::arg("mesh"), py::arg("metric") = "euclidean", py::arg("weight") = "const:1",
      py::arg("boundary") = "dirichlet", py::arg("t") = 0.0, py::arg("k") = 20, py::arg("method") = "auto",
      py::arg("seed") = 1,
      "Largest k eigenvalues of each sign of R v = lambda (K + t Mm) v, as descending magnitudes.");

  mod.def(
      "laplace_eigenvalues",
      [](const Mesh& m, const std::string& metric, const std::string& boundary, int count, const std::string& method) {
        const Pencil p = pencil(m, metric, "const:1", boundary);
        return solve_laplace(p, count, options(method, 1)).values;
      },
      py::arg("mesh"), py::arg("metric") = "euclidean", py::arg("boundary") = "dirichlet", py::arg("count") = 10,
      py::arg("method") = "auto", "Smallest eigenvalues of K v = Lambda Mm v, ascending.");

  mod.def(
      "weyl_target",
      [](const Mesh& m, const std::string& metric, const std::string& weight, int quad_order) {
        const WeylTarget t = weyl_target(m, parse_metric_spec(metric), parse_weight_spec(weight), quad_order);
        py::dict d;
        d["c_plus"] = t.c_plus;
        d["c_minus"] = t.c_minus;
        d["vol"] = t.vol;
        d["int_plus"] = t.int_plus;
        d["int_minus"] = t.int_minus;
        return d;
      },
      py::arg("mesh"), py::arg("metric") = "euclidean", py::arg("weight") = "const:1", py::arg("quad_order") = 2);

  mod.def(
      "fit_limit",
      [](const std::vector<double>& values, double target, int k_lo, int k_hi) {
        const FitResult f = fit_limit(values, Sign::Plus, Window{k_lo, k_hi}, target);
        py::dict d;
        d["empty"] = f.empty;
        d["k_lo"] = f.k_lo;
        d["k_hi"] = f.k_hi;
        d["estimate"] = f.estimate;
        d["rel_dev"] = f.rel_dev;
        d["slope"] = f.slope;
        d["sqrt_coeff"] = f.sqrt_coeff;
        d["slope_rel_dev"] = f.slope_rel_dev;
        return d;
      },
      py::arg("values"), py::arg("target"), py::arg("k_lo") = 0, py::arg("k_hi") = 0,
      "Tail average and two-parameter fit of a descending eigenvalue list.");

  mod.def(
      "run",
      [](const std::string& task, const std::filesystem::path& config, std::optional<std::filesystem::path> out,
         std::optional<int> level, std::optional<std::uint64_t> seed) {
        RunOverrides ov{out, level, seed};
        std::ostringstream log, err;
        int rc;
        {
          py::gil_scoped_release release;
          rc = run_experiment(task, config, ov, log, err);
        }
        return py::make_tuple(rc, log.str(), err.str());
      },
      py::arg("task"), py::arg("config"), py::arg("out") = py::none(), py::arg("level") = py::none(),
      py::arg("seed") = py::none(), "Runs a CLI task; returns (exit status, log, error text).");
}
