#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "combline/errors.hpp"
#include "combline/levinmap.hpp"

using namespace combline;
using cplx = std::complex<double>;

namespace {

RealLineSet single_gap() { return RealLineSet({{-1.0, 1.0}}, {-21.0, 21.0}); }

// Closed form for the single gap (-1, 1): sqrt(z - 1) sqrt(z + 1) / sqrt 2
// with principal branches per factor, which is the limit from above on the
// real axis.  Sends i to i and the gap onto a slit of height 1/sqrt 2.
cplx sg_map(cplx z) {
  return std::sqrt(z - 1.0) * std::sqrt(z + 1.0) / std::sqrt(2.0);
}

cplx sg_deriv(cplx z) {
  return z / (std::sqrt(2.0) * std::sqrt(z - 1.0) * std::sqrt(z + 1.0));
}

}  // namespace

TEST_CASE("single gap solve reproduces the closed-form map") {
  LevinMap m = solve_parameters(single_gap());

  REQUIRE(m.tip_preimages().size() == 1);
  CHECK(std::abs(m.tip_preimages()[0]) < 1e-10);
  CHECK(std::abs(m.slit_bases()[0]) < 1e-9);
  CHECK(m.slit_heights()[0] ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  REQUIRE(m.closure_residuals().size() == 1);
  CHECK(m.closure_residuals()[0] < 1e-10);

  CHECK(std::abs(m.evaluate(cplx(0.0, 1.0)) - cplx(0.0, 1.0)) < 1e-9);

  const cplx pts[] = {{0.5, 1.2}, {-3.7, 0.4}, {2.2, 0.03},
                      {-0.8, 2.5}, {0.0, 0.001}, {-18.0, 0.2}};
  for (cplx z : pts) {
    CHECK(std::abs(m.evaluate(z) - sg_map(z)) < 1e-8);
    CHECK(std::abs(m.derivative(z) - sg_deriv(z)) < 1e-8);
  }

  CHECK(m.boundary_value(2.0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-9));
  CHECK(m.boundary_value(-2.0) == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-9));
  CHECK(m.boundary_value(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

  // limits onto the axis match the fast boundary path
  for (double x : {-5.0, -1.01, 1.2, 7.0}) {
    const cplx lim = m.evaluate(cplx(x, 1e-14));
    CHECK(std::abs(lim - cplx(m.boundary_value(x), 0.0)) < 5e-8);
  }
}

TEST_CASE("gap points land on the vertical slit") {
  LevinMap m = solve_parameters(single_gap());
  const double v = m.slit_heights()[0];

  const cplx tip = m.evaluate(cplx(0.0, 0.0));
  CHECK(std::abs(tip - cplx(0.0, 1.0 / std::sqrt(2.0))) < 1e-8);

  const cplx side = m.evaluate(cplx(0.5, 0.0));
  CHECK(std::abs(side.real()) < 1e-9);
  CHECK(side.imag() > 0.0);
  CHECK(side.imag() < v);
  // |phi| on the slit agrees with the modulus of the continued formula
  CHECK(side.imag() ==
        doctest::Approx(std::sqrt(0.75) / std::sqrt(2.0)).epsilon(1e-8));

  // derivative is purely imaginary inside the gap
  const cplx dg = m.derivative(cplx(0.5, 0.0));
  CHECK(std::abs(dg.real()) < 1e-10);
  CHECK(dg.imag() ==
        doctest::Approx(-0.5 / (std::sqrt(2.0) * std::sqrt(0.75))).epsilon(1e-8));
}

TEST_CASE("mirror-symmetric gaps get mirror-symmetric slits") {
  RealLineSet E({{-3.0, -1.0}, {1.0, 3.0}}, {-23.0, 23.0});
  LevinMap m = solve_parameters(E);
  REQUIRE(m.tip_preimages().size() == 2);
  CHECK(m.tip_preimages()[0] == doctest::Approx(-m.tip_preimages()[1]).epsilon(1e-9));
  CHECK(m.slit_bases()[0] == doctest::Approx(-m.slit_bases()[1]).epsilon(1e-8));
  CHECK(m.slit_heights()[0] == doctest::Approx(m.slit_heights()[1]).epsilon(1e-9));
  for (double r : m.closure_residuals()) CHECK(r < 1e-10);
  CHECK(std::abs(m.evaluate(cplx(0.0, 1.0)) - cplx(0.0, 1.0)) < 1e-9);
}

TEST_CASE("six-gap comb solves with balanced slit heights") {
  RealLineSet E = example1(-3, 3, 2.0, 1.0);
  LevinMap m = solve_parameters(E);
  REQUIRE(m.slit_heights().size() == 6);
  for (double r : m.closure_residuals()) CHECK(r < 1e-10);
  double vmin = m.slit_heights()[0], vmax = vmin;
  for (double v : m.slit_heights()) {
    CHECK(v > 0.0);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  CHECK(vmax / vmin < 3.0);
}

TEST_CASE("image diameter distance") {
  LevinMap m = solve_parameters(single_gap());

  CHECK(m.rho(1.0, 1.0) == 0.0);
  CHECK(m.rho(2.0, 1.0) == m.rho(1.0, 2.0));
  CHECK(m.rho(1.0, 2.0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-6));
  // segment covering the gap: diameter reaches the slit tip
  CHECK(m.rho(-1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(m.rho(-2.0, 2.0) == doctest::Approx(2.0 * std::sqrt(1.5)).epsilon(1e-6));
  // nested segments have nondecreasing diameters
  CHECK(m.rho(1.0, 3.0) >= m.rho(1.0, 2.0));
  CHECK(m.rho(-2.0, 2.0) >= m.rho(-1.0, 1.0));

  CHECK_THROWS_AS(m.rho(0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(m.rho(1.0, 30.0), std::domain_error);
}

TEST_CASE("a set without gaps maps by the identity") {
  RealLineSet E({}, {-6.0, 6.0});
  LevinMap m = solve_parameters(E);
  CHECK(m.tip_preimages().empty());
  CHECK(std::abs(m.evaluate(cplx(1.0, 2.0)) - cplx(1.0, 2.0)) < 1e-12);
  CHECK(m.boundary_value(-4.5) == doctest::Approx(-4.5).epsilon(1e-13));
  CHECK(m.rho(1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.vertical_displacement(3.0, 0.25) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("vertical displacement matches direct evaluation") {
  LevinMap m = solve_parameters(single_gap());

  // at the gap endpoint: |phi(1 + i d) - phi(1)| = sqrt(d sqrt(4 + d^2) / 2)
  const double d = 0.01;
  const double want = std::sqrt(d * std::sqrt(4.0 + d * d) / 2.0);
  CHECK(m.vertical_displacement(1.0, d) == doctest::Approx(want).epsilon(1e-7));

  // at an interior point the same quantity via evaluate
  const double direct =
      std::abs(m.evaluate(cplx(4.0, 0.5)) - cplx(m.boundary_value(4.0), 0.0));
  CHECK(m.vertical_displacement(4.0, 0.5) == doctest::Approx(direct).epsilon(1e-8));
  CHECK(m.vertical_displacement(4.0, 0.5) ==
        doctest::Approx(std::abs(sg_map(cplx(4.0, 0.5)) - sg_map(cplx(4.0, 0.0))))
            .epsilon(1e-7));

  CHECK_THROWS_AS(m.vertical_displacement(0.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(m.vertical_displacement(2.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(m.evaluate(cplx(1.0, -0.1)), std::domain_error);
}

TEST_CASE("numerical inverse returns to the preimage") {
  LevinMap m = solve_parameters(single_gap());
  for (cplx z0 : {cplx(0.4, 1.1), cplx(-2.0, 0.3), cplx(5.0, 4.0)}) {
    CHECK(std::abs(m.invert(m.evaluate(z0)) - z0) < 1e-8);
  }
}

TEST_CASE("map files round-trip and reject damage") {
  const std::string path = "test_levinmap_roundtrip.tmp";
  LevinMap m = solve_parameters(single_gap());
  m.save(path);

  LevinMap back = LevinMap::load(path);
  CHECK(std::abs(back.evaluate(cplx(0.3, 0.7)) - m.evaluate(cplx(0.3, 0.7))) < 1e-9);
  CHECK(back.rho(1.0, 2.0) == doctest::Approx(m.rho(1.0, 2.0)).epsilon(1e-9));
  CHECK(back.slit_heights()[0] ==
        doctest::Approx(m.slit_heights()[0]).epsilon(1e-12));

  CHECK_THROWS_AS(LevinMap::load("no_such_file.tmp"), structural_error);

  // garbage content
  {
    std::ofstream out(path);
    out << "not a map file\n";
  }
  CHECK_THROWS_AS(LevinMap::load(path), structural_error);

  // stored slit height contradicting the gap geometry
  m.save(path);
  std::vector<std::string> lines;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  REQUIRE(lines.size() >= 2);
  {
    std::istringstream ss(lines[1]);
    double a, b, c, u, v;
    REQUIRE((ss >> a >> b >> c >> u >> v));
    std::ostringstream os;
    os << a << " " << b << " " << c << " " << u << " " << v * 1.5;
    lines[1] = os.str();
    std::ofstream out(path);
    for (const std::string& l : lines) out << l << "\n";
  }
  CHECK_THROWS_AS(LevinMap::load(path), structural_error);
  std::remove(path.c_str());
}

TEST_CASE("touching gaps cannot be resolved") {
  RealLineSet E = example2(0, 0, 3);
  CHECK_THROWS_AS(solve_parameters(E), resolution_error);
  // the failure is a structural one as far as callers are concerned
  CHECK_THROWS_AS(solve_parameters(E), structural_error);
}
