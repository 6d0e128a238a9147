#include "graftlab/cli.hpp"
#include "graftlab/geometry.hpp"
#include "graftlab/hypersolve.hpp"
#include "graftlab/identities.hpp"
#include "graftlab/spectral.hpp"
#include "graftlab/variation.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace graftlab;

namespace {

cli::RunConfig config_from(const py::dict& overrides) {
  cli::RunConfig config;
  for (const auto& [key, value] : overrides) {
    cli::set_key(config, py::str(key).cast<std::string>(), py::str(value).cast<std::string>());
  }
  cli::validate(config);
  return config;
}

}  // namespace

PYBIND11_MODULE(_graftlab, m) {
  m.doc() = "grafted collar numerics";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SolveError>(m, "SolveError", PyExc_RuntimeError);
  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<OuterBoundary>(m, "OuterBoundary")
      .value("dirichlet_zero", OuterBoundary::dirichlet_zero)
      .value("neumann_zero", OuterBoundary::neumann_zero);
  py::enum_<Side>(m, "Side").value("left", Side::left).value("right", Side::right);

  py::class_<geometry::GraftedCollar>(m, "GraftedCollar")
      .def(py::init<double, double, double, OuterBoundary>(), py::arg("ell"), py::arg("s"),
           py::arg("a"), py::arg("outer_bc") = OuterBoundary::dirichlet_zero)
      .def_property_readonly("ell", &geometry::GraftedCollar::ell)
      .def_property_readonly("s", &geometry::GraftedCollar::s)
      .def_property_readonly("a", &geometry::GraftedCollar::a)
      .def("seam", &geometry::GraftedCollar::seam);

  m.def("total_area", &geometry::total_area);
  m.def("total_area_quadrature", &geometry::total_area_quadrature, py::arg("chart"),
        py::arg("panels") = 10000);
  m.def("conformal_modulus", &geometry::conformal_modulus);
  m.def("conformal_modulus_quadrature", &geometry::conformal_modulus_quadrature,
        py::arg("chart"), py::arg("panels") = 10000);
  m.def("gudermannian", &geometry::gudermannian);

  py::class_<spectral::ModePair>(m, "ModePair")
      .def(py::init<>())
      .def_readwrite("c", &spectral::ModePair::c)
      .def_readwrite("d", &spectral::ModePair::d);
  py::class_<spectral::FourierSolution>(m, "FourierSolution")
      .def_readonly("ell", &spectral::FourierSolution::ell)
      .def_readonly("s", &spectral::FourierSolution::s)
      .def_readwrite("c0", &spectral::FourierSolution::c0)
      .def_readwrite("d0", &spectral::FourierSolution::d0)
      .def_readwrite("modes", &spectral::FourierSolution::modes);
  m.def("random_solution", &spectral::random_solution, py::arg("ell"), py::arg("s"),
        py::arg("truncation"), py::arg("seed"), py::arg("amplitude") = 1.0);
  m.def("evaluate", &spectral::evaluate);

  m.def("flat_variation_coefficient", &variation::flat_variation_coefficient);

  m.def("dtn", [](int n, double ell, double a, OuterBoundary bc) {
    return hypersolve::dtn(n, ell, a, bc);
  });
  m.def("mode_cross_error", [](int n, double ell, double a, OuterBoundary bc) {
    return hypersolve::mode_solve(n, ell, a, bc, 1.0).cross_method_error;
  });

  m.def("boundary_term_pair", [](const spectral::FourierSolution& sol, double lambda0,
                                 double rho0) {
    auto vl = variation::solve_flat_variation(spectral::neumann_trace_flat(sol, Side::left),
                                              lambda0);
    auto vr = variation::solve_flat_variation(spectral::neumann_trace_flat(sol, Side::right),
                                              rho0);
    const double closed = identities::boundary_term_closed(sol, vl, vr);
    const double quad = identities::boundary_term_quadrature(
        spectral::dirichlet_trace(sol, Side::left), spectral::dirichlet_trace(sol, Side::right),
        variation::hyperbolic_neumann(vl), variation::hyperbolic_neumann(vr));
    return py::make_tuple(closed, quad);
  });
  m.def("mode_system_determinant", &identities::mode_system_determinant);

  m.def(
      "verify",
      [](const py::dict& overrides) {
        const auto reports = cli::verify_suite(config_from(overrides));
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : reports) doc.push_back(identities::to_json(r));
        return doc.dump();
      },
      py::arg("overrides") = py::dict(), "identity suite as a JSON array string");
  m.def(
      "sweep",
      [](const py::dict& overrides) {
        auto config = config_from(overrides);
        config.out.clear();
        std::ostringstream out;
        const int code = cli::cmd_sweep(config, out);
        return py::make_tuple(code, out.str());
      },
      py::arg("overrides") = py::dict(), "(exit code, CSV text followed by a summary line)");
}
