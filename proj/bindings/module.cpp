#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gradex/runner.hpp"

namespace py = pybind11;
using namespace gradex;

namespace {

Vec to_vec(const std::vector<double>& v) {
  if (v.size() < 2 || v.size() > 3) throw std::invalid_argument("expected 2 or 3 coordinates");
  return Vec{v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

std::vector<double> from_vec(const Vec& v, int dim = 2) {
  if (dim == 3) return {v.x, v.y, v.z};
  return {v.x, v.y};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "gradient-constrained extensions, anisotropic graph distances, and supremal "
            "level calibration";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<GeometryError>(m, "GeometryError");
  py::register_exception<ModelError>(m, "ModelError");

  py::class_<ScalarExpr>(m, "ScalarExpr")
      .def("__call__",
           [](const ScalarExpr& e, const std::vector<double>& x) { return e.eval(to_vec(x)); })
      .def_static("from_json",
                  [](const std::string& s) { return expr_from_json(json::parse(s)); })
      .def("to_json", [](const ScalarExpr& e) { return expr_to_json(e).dump(); });

  py::class_<ConvexSetInstance>(m, "ConvexSet")
      .def_static("ball", &ConvexSetInstance::ball, py::arg("radius"), py::arg("dim") = 2)
      .def_static("polytope",
                  [](const std::vector<std::vector<double>>& verts) {
                    std::vector<Vec> vs;
                    for (const auto& v : verts) vs.push_back(to_vec(v));
                    return ConvexSetInstance::polytope(std::move(vs));
                  })
      .def_static("ellipsoid",
                  [](const std::vector<std::vector<double>>& rows) {
                    Mat3 mat = Mat3::identity();
                    int n = static_cast<int>(rows.size());
                    for (int r = 0; r < n; ++r)
                      for (int c = 0; c < n; ++c) mat(r, c) = rows[r][c];
                    return ConvexSetInstance::ellipsoid(mat, n == 3 ? 3 : 2);
                  })
      .def("gauge", [](const ConvexSetInstance& k, const std::vector<double>& p) {
        return k.gauge(to_vec(p));
      })
      .def("support", [](const ConvexSetInstance& k, const std::vector<double>& q) {
        return k.support(to_vec(q));
      })
      .def_property_readonly("alpha", &ConvexSetInstance::alpha)
      .def_property_readonly("M", &ConvexSetInstance::bound_M);

  py::class_<ConvexField>(m, "ConvexField")
      .def_static("from_json",
                  [](const std::string& s) { return field_from_json(json::parse(s)); })
      .def("to_json", [](const ConvexField& f) { return field_to_json(f).dump(); })
      .def_static("constant", &ConvexField::constant)
      .def("gauge",
           [](const ConvexField& f, const std::vector<double>& x, const std::vector<double>& p) {
             return gauge_eval(f, to_vec(x), to_vec(p));
           })
      .def("support",
           [](const ConvexField& f, const std::vector<double>& x, const std::vector<double>& q) {
             return support_eval(f, to_vec(x), to_vec(q));
           })
      .def("support_argmax",
           [](const ConvexField& f, const std::vector<double>& x, const std::vector<double>& q) {
             return from_vec(support_argmax(f, to_vec(x), to_vec(q)), f.dim());
           })
      .def("bipolar_gauge",
           [](const ConvexField& f, const std::vector<double>& x, const std::vector<double>& p) {
             return bipolar_gauge(f, to_vec(x), to_vec(p));
           })
      .def_property_readonly("alpha", &ConvexField::alpha)
      .def_property_readonly("M", &ConvexField::bound_M);

  m.def("hausdorff_distance", &hausdorff_distance, py::arg("a"), py::arg("b"),
        py::arg("directions") = 4096);

  py::class_<Domain>(m, "Domain")
      .def_static("from_json",
                  [](const std::string& s) { return domain_from_json(json::parse(s)); })
      .def("to_json", [](const Domain& d) { return domain_to_json(d).dump(); });

  py::class_<MeshGraph, std::shared_ptr<MeshGraph>>(m, "MeshGraph")
      .def_property_readonly("size", &MeshGraph::size)
      .def_property_readonly("interior_count", &MeshGraph::interior_count)
      .def("node_position",
           [](const MeshGraph& g, int i) { return from_vec(g.node(i).pos, g.dim()); })
      .def("nearest_nodes",
           [](const MeshGraph& g, const std::vector<double>& p) {
             return g.nearest_nodes(to_vec(p));
           })
      .def("boundary_nodes", &MeshGraph::boundary_nodes);

  m.def(
      "discretize",
      [](const Domain& d, const ConvexField& f, double h, int stencil) {
        return std::const_pointer_cast<MeshGraph>(discretize(d, f, h, stencil));
      },
      py::arg("domain"), py::arg("field"), py::arg("h"), py::arg("stencil") = 16);

  py::class_<ScalarField>(m, "ScalarField")
      .def("__getitem__", [](const ScalarField& f, int i) {
         if (i < 0 || i >= f.size()) throw py::index_error();
         return f[i];
      })
      .def_property_readonly("values", &ScalarField::values);

  m.def("quasi_dist",
        [](std::shared_ptr<MeshGraph> g, const std::vector<double>& from,
           const std::vector<double>& to) {
          return extended_distance(g, to_vec(from), to_vec(to));
        },
        "extended quasi-distance between query points (min over coincident node copies)");

  py::class_<AdmissibilityReport>(m, "AdmissibilityReport")
      .def_readonly("ok", &AdmissibilityReport::ok)
      .def_readonly("margin", &AdmissibilityReport::margin);

  py::class_<ExtensionProblem>(m, "ExtensionProblem")
      .def(py::init([](std::shared_ptr<MeshGraph> g, const std::string& datum_json) {
             return ExtensionProblem(g, expr_from_json(json::parse(datum_json)));
           }),
           py::arg("graph"), py::arg("datum_json"))
      .def("admissibility", [](const ExtensionProblem& p) { return admissibility_check(p); })
      .def("maximal_extension",
           [](const ExtensionProblem& p, bool ovr) { return maximal_extension(p, ovr); },
           py::arg("override_admissibility") = false)
      .def("minimal_extension",
           [](const ExtensionProblem& p, bool ovr) { return minimal_extension(p, ovr); },
           py::arg("override_admissibility") = false);

  py::class_<UniquenessMask>(m, "UniquenessMask")
      .def_readonly("eps", &UniquenessMask::eps)
      .def_property_readonly("interior_fraction", &UniquenessMask::interior_fraction)
      .def("__getitem__", [](const UniquenessMask& m_, int i) { return m_[i]; });

  m.def("uniqueness_set",
        [](const ScalarField& sp, const ScalarField& sm, std::optional<double> eps) {
          return uniqueness_set(sp, sm, eps);
        },
        py::arg("splus"), py::arg("sminus"), py::arg("eps") = std::nullopt);

  m.def("run_scenario",
        [](const std::string& config_json, const std::string& command,
           const std::string& out_dir, bool override_admissibility) {
          ScenarioConfig config = parse_scenario(json::parse(config_json));
          RunOptions opt;
          opt.out_dir = out_dir;
          opt.override_admissibility = override_admissibility;
          RunOutcome outcome = run_scenario(config, command, opt);
          return py::make_tuple(outcome.ok, outcome.report);
        },
        py::arg("config_json"), py::arg("command"), py::arg("out_dir") = "out",
        py::arg("override_admissibility") = false);

  m.attr("__version__") = "0.1.0";
}
