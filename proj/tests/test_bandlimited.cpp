#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "combline/bandlimited.hpp"
#include "combline/errors.hpp"
#include "combline/quadrature.hpp"

using namespace combline;

namespace {

RealLineSet single_gap() { return RealLineSet({{-1.0, 1.0}}, {-21.0, 21.0}); }
RealLineSet gap_free() { return RealLineSet({}, {-6.0, 6.0}); }

double ref_sinc(double y) {
  return std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
}

}  // namespace

TEST_CASE("function specs parse and validate") {
  RealLineSet E = single_gap();

  SampledFunction c = make_sampled_function("const:2.5", E);
  CHECK(c(0.0) == 2.5);
  CHECK(c(17.3) == 2.5);
  CHECK(c.sup_norm == 2.5);
  CHECK(c.features.empty());

  SampledFunction a = make_sampled_function("abs-pow:x0=0,alpha=0.5", E);
  CHECK(a(4.0) == doctest::Approx(2.0));
  CHECK(a(-4.0) == doctest::Approx(2.0));
  CHECK(a.sup_norm == doctest::Approx(std::sqrt(21.0)));
  REQUIRE(a.features.size() == 1);
  CHECK(a.features[0] == 0.0);

  SampledFunction t = make_sampled_function("tau-pow:x0=1,alpha=0.5", E);
  CHECK(t(1.0) == 0.0);
  // inside the layer of the adjacent gap (length 2) the profile is
  // sqrt(2 * 0.05) = sqrt(0.1); beyond the crossover at distance 2 it is
  // the plain distance
  CHECK(t(1.05) == doctest::Approx(std::pow(0.1, 0.25)).epsilon(1e-12));
  CHECK(t(2.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
  CHECK(t(5.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(t.features == std::vector<double>{1.0});

  // alpha = 1 is the Lipschitz end of the admissible range
  CHECK_NOTHROW(make_sampled_function("abs-pow:x0=0,alpha=1", E));

  CHECK_THROWS_AS(make_sampled_function("garbage", E), structural_error);
  CHECK_THROWS_AS(make_sampled_function("nope:x0=1,alpha=0.5", E), structural_error);
  CHECK_THROWS_AS(make_sampled_function("const:abc", E), structural_error);
  CHECK_THROWS_AS(make_sampled_function("abs-pow:alpha=0.5", E), structural_error);
  CHECK_THROWS_AS(make_sampled_function("abs-pow:x0=0,alpha=0", E), structural_error);
  CHECK_THROWS_AS(make_sampled_function("abs-pow:x0=0,alpha=1.5", E), structural_error);
  CHECK_THROWS_AS(make_sampled_function("abs-pow:x0;alpha", E), structural_error);
  // tau-pow needs its center inside the set, and 0 sits in the gap
  CHECK_THROWS_AS(make_sampled_function("tau-pow:x0=0,alpha=0.5", E), structural_error);
}

TEST_CASE("table functions interpolate and clamp") {
  RealLineSet E = gap_free();
  SampledFunction f = make_table_function({-6.0, 0.0, 6.0}, {0.0, 2.0, 1.0}, E);
  CHECK(f(-3.0) == doctest::Approx(1.0));
  CHECK(f(3.0) == doctest::Approx(1.5));
  CHECK(f(-10.0) == 0.0);
  CHECK(f(10.0) == 1.0);
  CHECK(f.sup_norm == doctest::Approx(2.0));

  CHECK_THROWS_AS(make_table_function({0.0}, {1.0}, E), structural_error);
  CHECK_THROWS_AS(make_table_function({0.0, 1.0}, {1.0}, E), structural_error);
  CHECK_THROWS_AS(make_table_function({1.0, 1.0}, {0.0, 1.0}, E), structural_error);
}

TEST_CASE("linear extension bridges gaps and freezes at the window") {
  RealLineSet E = single_gap();
  SampledFunction f = make_sampled_function("abs-pow:x0=2,alpha=1", E);
  RealFn ext = extend_linear(f, E);
  CHECK(ext(5.0) == doctest::Approx(3.0));        // unchanged on E
  CHECK(ext(0.0) == doctest::Approx(2.0));        // midpoint of f(-1)=3, f(1)=1
  CHECK(ext(-0.5) == doctest::Approx(2.5));
  CHECK(ext(-30.0) == doctest::Approx(23.0));     // frozen at f(-21)
  CHECK(ext(30.0) == doctest::Approx(19.0));      // frozen at f(21)
}

TEST_CASE("averaging kernel is a unit-mass even bump") {
  const double C = kernel_constant();
  CHECK(C == doctest::Approx(2.303).epsilon(0.01));

  for (int n : {4096, 8192}) {
    const double mass =
        2.0 * quad::composite_simpson([](double t) { return kernel_value(t); },
                                      0.0, 3.25, n);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }

  for (double t : {0.1, 0.7, 1.3, 2.9}) {
    CHECK(kernel_value(t) == kernel_value(-t));
    CHECK(kernel_value(t) >= 0.0);
  }
  // zeros of sinc crush the 100th power below any representable level
  CHECK(kernel_value(M_PI) <= 1e-290);

  CHECK(kernel_tail_mass(0.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kernel_tail_mass(3.25) == 0.0);
  const double t1 = kernel_tail_mass(1.0);
  CHECK(t1 > 0.0);
  CHECK(t1 < 1e-6);
  CHECK(kernel_tail_mass(0.5) > t1);
}

TEST_CASE("convolution reproduces constants and respects the window") {
  RealLineSet E = gap_free();
  SampledFunction f = make_sampled_function("const:2", E);
  BandlimitedApproximant g = kernel_approximant(f, E, 8.0);
  CHECK(g.method == "kernel");
  CHECK(g.type_bound == doctest::Approx(800.0));
  for (double x : {-2.0, 0.0, 1.7}) {
    CHECK(g(x) == doctest::Approx(2.0).epsilon(1e-6));
  }

  RealLineSet tight({}, {-1.0, 1.0});
  SampledFunction one = make_sampled_function("const:1", tight);
  CHECK_THROWS_AS(kernel_approximant(one, tight, 0.05), window_error);
  CHECK_THROWS_AS(kernel_approximant(f, E, 0.0), structural_error);
}

TEST_CASE("error grid covers the core and focuses on features") {
  RealLineSet E = single_gap();
  const double sigma = 2.0;
  const double spacing = M_PI / sigma / 8.0;
  std::vector<double> grid = make_error_grid(E, sigma, 0.2, 8, {1.0});

  REQUIRE(grid.size() > 50);
  const double core_lo = -21.0 + 0.2 * 42.0, core_hi = 21.0 - 0.2 * 42.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(E.contains(grid[i], 1e-12));
    CHECK(grid[i] >= core_lo - 1e-12);
    CHECK(grid[i] <= core_hi + 1e-12);
    if (i > 0) CHECK(grid[i] > grid[i - 1]);
  }
  // the feature itself and its finest ladder point are on the grid
  CHECK(std::binary_search(grid.begin(), grid.end(), 1.0));
  CHECK(std::binary_search(grid.begin(), grid.end(),
                           1.0 + spacing * std::ldexp(1.0, -12)));

  // features outside the core window or outside the set change nothing
  std::vector<double> plain = make_error_grid(E, sigma, 0.2, 8);
  CHECK(make_error_grid(E, sigma, 0.2, 8, {20.0}) == plain);
  CHECK(make_error_grid(E, sigma, 0.2, 8, {0.0}) == plain);

  CHECK_THROWS_AS(make_error_grid(E, 0.0), structural_error);
  CHECK_THROWS_AS(make_error_grid(E, 1.0, 0.5), structural_error);
}

TEST_CASE("minimax recovers an in-span target") {
  RealLineSet E = gap_free();
  const double sigma = 4.0;
  const int N = minimax_half_width(E, sigma);
  CHECK(N == 8);

  SampledFunction f;
  f.spec = "custom";
  f.f = [sigma](double x) {
    return ref_sinc(sigma * x) + 0.3 * ref_sinc(sigma * x - 3.0 * M_PI);
  };
  f.sup_norm = 1.3;

  std::vector<double> grid = make_error_grid(E, sigma, 0.2, 12);
  auto [g, err] = minimax_approx(f, E, sigma, N, grid);
  CHECK(err < 1e-6);
  CHECK(g.method == "minimax");
  CHECK(g.type_bound == doctest::Approx(sigma));
  CHECK(static_cast<int>(g.coeffs.size()) == 2 * N + 1);
  CHECK(std::abs(g(0.77) - f(0.77)) < 1e-5);

  CHECK_THROWS_AS(minimax_approx(f, E, sigma, N, {0.0, 1.0, 2.0}), structural_error);
  std::vector<double> bad = grid;
  bad.push_back(-7.0);
  std::sort(bad.begin(), bad.end());
  CHECK_THROWS_AS(minimax_approx(f, E, sigma, N, bad), structural_error);
  bad = grid;
  bad.push_back(-5.5);  // inside the set, outside the core window
  std::sort(bad.begin(), bad.end());
  CHECK_THROWS_AS(minimax_approx(f, E, sigma, N, bad), structural_error);
  CHECK_THROWS_AS(minimax_approx(f, E, sigma, 2, grid), structural_error);
}

TEST_CASE("wider bands approximate a cusp strictly better") {
  RealLineSet E = gap_free();
  SampledFunction f = make_sampled_function("abs-pow:x0=0,alpha=0.5", E);

  double kerr4 = 0.0, kerr8 = 0.0, merr4 = 0.0, merr8 = 0.0;
  for (double sigma : {4.0, 8.0}) {
    std::vector<double> grid = make_error_grid(E, sigma, 0.2, 40, f.features);
    BandlimitedApproximant k = kernel_approximant(f, E, sigma);
    double ke = 0.0;
    for (double x : grid) ke = std::max(ke, std::abs(k(x) - f(x)));
    auto [m, me] = minimax_approx(f, E, sigma, minimax_half_width(E, sigma), grid);
    (void)m;
    if (sigma == 4.0) {
      kerr4 = ke;
      merr4 = me;
    } else {
      kerr8 = ke;
      merr8 = me;
    }
  }
  CHECK(kerr4 > 1e-4);
  CHECK(merr4 > 1e-4);
  CHECK(kerr8 < kerr4);
  CHECK(merr8 < merr4);
  // the convolution error of |x|^(1/2) halves in sigma like sigma^(-1/2)
  CHECK(kerr8 / kerr4 == doctest::Approx(std::pow(0.5, 0.5)).epsilon(0.02));
}

TEST_CASE("power-law rates are recovered exactly") {
  std::vector<std::pair<double, double>> pts;
  for (double s : {4.0, 8.0, 16.0, 32.0, 64.0})
    pts.emplace_back(s, 3.0 * std::pow(s, -0.5));
  RateFit fit = rate_fit(pts);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(fit.residual < 1e-12);

  pts.pop_back();
  pts.pop_back();
  CHECK_THROWS_AS(rate_fit(pts), structural_error);
  CHECK_THROWS_AS(rate_fit({{4.0, 1.0}, {4.0, 0.5}, {8.0, 0.3}, {16.0, 0.2}}),
                  structural_error);
  CHECK_THROWS_AS(rate_fit({{4.0, 1.0}, {8.0, 0.0}, {16.0, 0.2}, {32.0, 0.1}}),
                  structural_error);
}
