#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "combline/quadrature.hpp"

using namespace combline;

namespace {
double integrate(const quad::Rule& r, const std::function<double(double)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}
}  // namespace

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
  const auto& r = quad::gauss_legendre(5);
  CHECK(integrate(r, [](double) { return 1.0; }) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(integrate(r, [](double x) { return x * x; }) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  // degree 9 = 2n - 1
  CHECK(integrate(r, [](double x) { return std::pow(x, 8); }) ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-13));
  // degree 10 must show quadrature error
  CHECK(std::abs(integrate(r, [](double x) { return std::pow(x, 10); }) - 2.0 / 11.0) >
        1e-6);
}

TEST_CASE("gauss-legendre nodes are symmetric and weights positive") {
  const auto& r = quad::gauss_legendre(16);
  REQUIRE(r.x.size() == 16);
  for (int i = 0; i < 16; ++i) {
    CHECK(r.w[i] > 0.0);
    CHECK(r.x[i] == doctest::Approx(-r.x[15 - i]).epsilon(1e-14));
    if (i > 0) CHECK(r.x[i] > r.x[i - 1]);
  }
}

TEST_CASE("gauss-jacobi(-1/2,-1/2) reproduces the chebyshev rule") {
  const int n = 8;
  const auto& r = quad::gauss_jacobi(n, -0.5, -0.5);
  const double pi = std::numbers::pi;
  for (int i = 0; i < n; ++i) {
    CHECK(r.w[i] == doctest::Approx(pi / n).epsilon(1e-13));
    const double node = std::cos(pi * (n - i - 0.5) / n);  // ascending order
    CHECK(r.x[i] == doctest::Approx(node).epsilon(1e-12));
  }
}

TEST_CASE("gauss-jacobi(0,-1/2) moments match closed forms") {
  // weight (1+x)^{-1/2} on [-1,1]
  const auto& r = quad::gauss_jacobi(12, 0.0, -0.5);
  const double s2 = std::sqrt(2.0);
  CHECK(integrate(r, [](double) { return 1.0; }) ==
        doctest::Approx(2.0 * s2).epsilon(1e-13));
  CHECK(integrate(r, [](double x) { return x; }) ==
        doctest::Approx(-2.0 * s2 / 3.0).epsilon(1e-12));
  CHECK(integrate(r, [](double x) { return x * x; }) ==
        doctest::Approx(2.0 * s2 * 7.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("gauss-jacobi absorbs an endpoint square-root singularity") {
  // ∫_{-1}^{1} cos(x) (1-x)^{-1/2} dx via a plain 16-point rule
  const auto& r = quad::gauss_jacobi(16, -0.5, 0.0);
  const double got = integrate(r, [](double x) { return std::cos(x); });
  // reference from the adaptive driver on the substituted smooth integrand
  // t = sqrt(1-x): integral = 2 ∫_0^{sqrt 2} cos(1 - t^2) dt
  const double ref = 2.0 * quad::adaptive_simpson(
                               [](double t) { return std::cos(1.0 - t * t); }, 0.0,
                               std::sqrt(2.0), 1e-12);
  CHECK(got == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("adaptive simpson handles smooth integrands") {
  CHECK(quad::adaptive_simpson([](double x) { return x * x * x; }, 0.0, 1.0, 1e-10) ==
        doctest::Approx(0.25).epsilon(1e-10));
  CHECK(quad::adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                               std::numbers::pi, 1e-11) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("composite simpson converges on a fixed grid") {
  const double ref = std::exp(1.0) - 1.0;
  const double c512 =
      quad::composite_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 512);
  CHECK(c512 == doctest::Approx(ref).epsilon(1e-11));
  // odd interval counts are rounded up rather than rejected
  const double c511 =
      quad::composite_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 511);
  CHECK(c511 == doctest::Approx(ref).epsilon(1e-11));
}

TEST_CASE("complex segment rule integrates analytic functions") {
  using cd = std::complex<double>;
  const auto& r = quad::gauss_legendre(12);
  // ∫ z^2 dz from 0 to i = -i/3
  cd got = quad::segment([](cd z) { return z * z; }, cd(0, 0), cd(0, 1), r);
  CHECK(std::abs(got - cd(0, -1.0 / 3.0)) < 1e-14);
  // path independence for exp: straight [1, i]
  got = quad::segment([](cd z) { return std::exp(z); }, cd(1, 0), cd(0, 1), r);
  cd ref = std::exp(cd(0, 1)) - std::exp(cd(1, 0));
  CHECK(std::abs(got - ref) < 1e-13);
}
