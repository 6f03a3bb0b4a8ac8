#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "combline/bandlimited.hpp"
#include "combline/errors.hpp"
#include "combline/levinmap.hpp"
#include "combline/realset.hpp"
#include "combline/taumetric.hpp"

namespace py = pybind11;
using namespace combline;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geometric distances and bandlimited approximation on closed "
            "subsets of the real line";

  py::register_exception<structural_error>(m, "StructuralError");
  py::register_exception<check_failure>(m, "CheckFailure");

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>())
      .def_readonly("lo", &Interval::lo)
      .def_readonly("hi", &Interval::hi)
      .def("length", &Interval::length)
      .def("__repr__", [](const Interval& i) {
        return "Interval(" + std::to_string(i.lo) + ", " + std::to_string(i.hi) + ")";
      });

  py::class_<RealLineSet>(m, "RealLineSet")
      .def(py::init([](std::vector<std::pair<double, double>> gaps,
                       std::pair<double, double> window, double c_tilde) {
             std::vector<Interval> gs;
             for (auto [a, b] : gaps) gs.push_back({a, b});
             return RealLineSet(gs, {window.first, window.second}, c_tilde);
           }),
           py::arg("gaps"), py::arg("window"), py::arg("c_tilde") = 0.0)
      .def_static("load", &RealLineSet::load, py::arg("path"),
                  py::arg("c_tilde") = 0.0)
      .def("save", &RealLineSet::save, py::arg("path"))
      .def("gaps", &RealLineSet::gaps)
      .def("islands", &RealLineSet::islands)
      .def("window", &RealLineSet::window)
      .def("c_tilde", &RealLineSet::c_tilde)
      .def("contains", &RealLineSet::contains, py::arg("x"), py::arg("tol") = 0.0);

  py::class_<GeometryReport>(m, "GeometryReport")
      .def_readonly("c1", &GeometryReport::c1)
      .def_readonly("c2", &GeometryReport::c2)
      .def_readonly("c5", &GeometryReport::c5)
      .def_readonly("tilde_disjoint", &GeometryReport::tilde_disjoint)
      .def_readonly("valid", &GeometryReport::valid)
      .def_readonly("threshold_c1", &GeometryReport::threshold_c1)
      .def_readonly("threshold_c2", &GeometryReport::threshold_c2);

  m.def("validate_geometry", &validate_geometry, py::arg("set"),
        py::arg("threshold_c1") = 10.0, py::arg("threshold_c2") = 10.0);

  m.def("tau", &tau, py::arg("set"), py::arg("x1"), py::arg("x2"),
        "Explicit three-case distance between two points of the set");

  py::class_<LevinMap>(m, "LevinMap")
      .def("evaluate", &LevinMap::evaluate, py::arg("z"))
      .def("boundary_value", &LevinMap::boundary_value, py::arg("x"))
      .def("derivative", &LevinMap::derivative, py::arg("z"))
      .def("rho", &LevinMap::rho, py::arg("x1"), py::arg("x2"))
      .def("vertical_displacement", &LevinMap::vertical_displacement,
           py::arg("x"), py::arg("delta"))
      .def("invert", &LevinMap::invert, py::arg("w"))
      .def("tip_preimages", &LevinMap::tip_preimages)
      .def("slit_bases", &LevinMap::slit_bases)
      .def("slit_heights", &LevinMap::slit_heights)
      .def("scale", &LevinMap::scale)
      .def("offset", &LevinMap::offset)
      .def("closure_residuals", &LevinMap::closure_residuals)
      .def("save", &LevinMap::save, py::arg("path"))
      .def_static("load", &LevinMap::load, py::arg("path"),
                  py::arg("quad_order") = 32);

  m.def(
      "solve_map",
      [](const RealLineSet& E, double tol, int quad_order) {
        SolveOptions opt;
        opt.tol = tol;
        opt.quad_order = quad_order;
        return solve_parameters(E, opt);
      },
      py::arg("set"), py::arg("tol") = 1e-12, py::arg("quad_order") = 32);

  py::class_<BandlimitedApproximant>(m, "Approximant")
      .def_readonly("method", &BandlimitedApproximant::method)
      .def_readonly("sigma", &BandlimitedApproximant::sigma)
      .def_readonly("type_bound", &BandlimitedApproximant::type_bound)
      .def("__call__",
           [](const BandlimitedApproximant& a, double x) { return a(x); });

  m.def(
      "kernel_approx",
      [](const RealLineSet& E, const std::string& fn_spec, double sigma) {
        SampledFunction f = make_sampled_function(fn_spec, E);
        return kernel_approximant(f, E, sigma);
      },
      py::arg("set"), py::arg("fn_spec"), py::arg("sigma"));

  m.def(
      "minimax_approx",
      [](const RealLineSet& E, const std::string& fn_spec, double sigma) {
        SampledFunction f = make_sampled_function(fn_spec, E);
        auto grid = make_error_grid(E, sigma, 0.2, 40, f.features);
        return minimax_approx(f, E, sigma, minimax_half_width(E, sigma), grid);
      },
      py::arg("set"), py::arg("fn_spec"), py::arg("sigma"),
      "Returns (approximant, sup error on the reference grid)");

  m.def(
      "omega_star",
      [](const RealLineSet& E, const std::string& fn_spec,
         const std::string& dist, std::vector<double> deltas) {
        SampledFunction f = make_sampled_function(fn_spec, E);
        PointPool pool = make_point_pool(E);
        std::vector<std::pair<double, double>> out;
        if (dist == "tau") {
          OmegaStarCurve curve(
              f.f, [&E](double a, double b) { return tau(E, a, b); }, pool);
          for (double d : deltas) out.emplace_back(d, curve(d));
        } else if (dist == "rho") {
          LevinMap map = solve_parameters(E);
          OmegaStarCurve curve(
              f.f, [&map](double a, double b) { return map.rho(a, b); }, pool);
          for (double d : deltas) out.emplace_back(d, curve(d));
        } else {
          throw structural_error("dist must be 'tau' or 'rho'");
        }
        return out;
      },
      py::arg("set"), py::arg("fn_spec"), py::arg("dist"), py::arg("deltas"),
      "Measured modulus of continuity against the chosen distance");
}
