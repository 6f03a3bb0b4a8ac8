#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "combline/realset.hpp"
#include "combline/taumetric.hpp"

namespace combline {

// Named test function over E with its sampled sup-norm.
// Spec mini-language: "tau-pow:x0=<v>,alpha=<v>", "abs-pow:x0=<v>,alpha=<v>",
// "const:<v>".
struct SampledFunction {
  std::string spec;
  RealFn f;
  double sup_norm = 0.0;
  // Points where f itself is singular (cusps, boundary-layer centers); error
  // measurement grids refine around them.
  std::vector<double> features;
  double operator()(double x) const { return f(x); }
};

SampledFunction make_sampled_function(const std::string& spec, const RealLineSet& E);
// Piecewise-linear table rule (clamped outside the sample range).
SampledFunction make_table_function(std::vector<double> x, std::vector<double> value,
                                    const RealLineSet& E);

// Extension to the whole line: unchanged on E, linear across each gap,
// frozen at the window-edge values beyond the window.  The extension never
// exceeds the sup of |f| over E.
RealFn extend_linear(const SampledFunction& f, const RealLineSet& E);

// Averaging kernel K(t) = C (sin t / t)^100 with C fixed once by quadrature
// so that ∫_R K = 1.
double kernel_constant();
double kernel_value(double t);
// ∫_{|t| > u} K.
double kernel_tail_mass(double u);

struct BandlimitedApproximant {
  double type_bound = 0.0;  // exponential type of the represented function
  std::string method;       // "kernel" (convolution rule) or "minimax" (sinc sum)
  double sigma = 0.0;       // kernel dilation, or sinc node scale (spacing pi/sigma)
  std::vector<double> coeffs;  // sinc representation only, k = -N..N
  Interval window{};
  RealFn eval;
  double operator()(double x) const { return eval(x); }
};

// g(x) = ∫ f_ext(t) σ K(σ(x - t)) dt, of exponential type 100σ.  Its sup
// error on E bounds the best type-100σ approximation error from above.
BandlimitedApproximant kernel_approximant(const SampledFunction& f,
                                          const RealLineSet& E, double sigma);

// Sup-error measurement grid on E inside the core window (window inset by
// core_inset per side): >= pts_per_spacing points per pi/sigma, refined 4x
// near gap endpoints, plus geometric ladders around the given feature points
// (error peaks sit exactly at cusps of the target, so the grid must contain
// them regardless of the base spacing's parity).
std::vector<double> make_error_grid(const RealLineSet& E, double sigma,
                                    double core_inset = 0.2,
                                    int pts_per_spacing = 40,
                                    const std::vector<double>& features = {});

struct MinimaxOptions {
  int max_iterations = 200;
  double weight_tol = 1e-10;
  int stall_limit = 25;
  double core_inset = 0.2;
};

// Near-best uniform approximation over span{sinc(σx - kπ) : |k| <= N} on a
// discrete grid, via Lawson's iteratively reweighted least squares.
// Returns the approximant and the achieved sup error on the grid.
std::pair<BandlimitedApproximant, double> minimax_approx(
    const SampledFunction& f, const RealLineSet& E, double sigma, int half_width,
    const std::vector<double>& grid, const MinimaxOptions& opt = {});

// Smallest admissible basis half-width: N pi / sigma spans the window.
int minimax_half_width(const RealLineSet& E, double sigma);

struct RateFit {
  double slope = 0.0;      // d log(err) / d log(sigma)
  double intercept = 0.0;  // log err at log sigma = 0
  double residual = 0.0;   // rms residual in log-log space
};
RateFit rate_fit(const std::vector<std::pair<double, double>>& sigma_error);

struct RateReport {
  std::vector<std::pair<double, double>> points;  // (sigma, error), sigma ascending
  RateFit fit;
  std::string method;
  double type_factor = 1.0;  // actual exponential type = type_factor * sigma
};

}  // namespace combline
