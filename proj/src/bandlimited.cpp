#include "combline/bandlimited.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "combline/errors.hpp"
#include "combline/quadrature.hpp"

namespace combline {
namespace {

// (sin t / t)^100 without the normalizing constant.
double sinc_pow(double t) {
  const double s = std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t;
  return std::pow(s * s, 50.0);
}

double sinc(double y) {
  return std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
}

// Effective kernel support: beyond |t| = 3.25 the envelope |t|^{-100} is far
// below every tolerance used here.
constexpr double kKernelSupport = 3.25;
// Truncation radius where K drops below 1e-12.
constexpr double kKernelCut = 1.5;

std::map<std::string, double> parse_params(const std::string& body,
                                           const std::string& spec) {
  std::map<std::string, double> out;
  std::istringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw structural_error("bad parameter '" + item + "' in function spec " + spec);
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw structural_error("bad value in function spec " + spec);
    }
  }
  return out;
}

double sampled_sup(const RealFn& f, const RealLineSet& E) {
  double sup = 0.0;
  for (const Interval& isl : E.islands()) {
    if (!(isl.length() > 0.0)) continue;
    for (int i = 0; i <= 128; ++i)
      sup = std::max(sup, std::abs(f(isl.lo + isl.length() * i / 128.0)));
  }
  return sup;
}

}  // namespace

SampledFunction make_sampled_function(const std::string& spec, const RealLineSet& E) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw structural_error("function spec needs the form name:params, got " + spec);
  const std::string name = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);

  SampledFunction out;
  out.spec = spec;
  if (name == "const") {
    double v;
    try {
      v = std::stod(body);
    } catch (const std::exception&) {
      throw structural_error("bad constant in function spec " + spec);
    }
    out.f = [v](double) { return v; };
    out.sup_norm = std::abs(v);
    return out;
  }

  const auto params = parse_params(body, spec);
  const auto need = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end())
      throw structural_error("function spec " + spec + " is missing " + key);
    return it->second;
  };
  const double x0 = need("x0");
  const double alpha = need("alpha");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw structural_error("function spec needs 0 < alpha <= 1");

  if (name == "tau-pow") {
    if (!E.contains(x0, 1e-12))
      throw structural_error("tau-pow center x0 must lie in the set");
    // Distance profile with the near-gap layer scaling sqrt(l * D), switched
    // to D at their crossover.  The raw pair surrogate jumps at its case
    // boundary, and a target built on it would put a hard floor under every
    // sup-error measurement; this envelope is continuous and stays within a
    // bounded factor of the surrogate.
    double ell = 0.0;
    double nearest = std::numeric_limits<double>::infinity();
    for (const Interval& g : E.gaps()) {
      const double d = std::max({g.lo - x0, x0 - g.hi, 0.0});
      if (d < nearest) {
        nearest = d;
        ell = g.length();
      }
    }
    out.f = [x0, alpha, ell](double x) {
      const double D = std::abs(x - x0);
      return std::pow(D >= ell ? D : std::sqrt(ell * D), alpha);
    };
  } else if (name == "abs-pow") {
    out.f = [x0, alpha](double x) { return std::pow(std::abs(x - x0), alpha); };
  } else {
    throw structural_error("unknown function family '" + name + "'");
  }
  out.features.push_back(x0);
  out.sup_norm = sampled_sup(out.f, E);
  return out;
}

SampledFunction make_table_function(std::vector<double> x, std::vector<double> value,
                                    const RealLineSet& E) {
  if (x.size() != value.size() || x.size() < 2)
    throw structural_error("table function needs at least two matching samples");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw structural_error("table abscissae must increase");
  SampledFunction out;
  out.spec = "table";
  out.f = [xs = std::move(x), vs = std::move(value)](double q) {
    if (q <= xs.front()) return vs.front();
    if (q >= xs.back()) return vs.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), q);
    const std::size_t i = it - xs.begin();
    const double t = (q - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return vs[i - 1] + t * (vs[i] - vs[i - 1]);
  };
  out.sup_norm = sampled_sup(out.f, E);
  return out;
}

RealFn extend_linear(const SampledFunction& f, const RealLineSet& E) {
  RealLineSet Ec = E;
  RealFn fn = f.f;
  return [Ec, fn](double x) {
    const Interval& w = Ec.window();
    if (x <= w.lo) return fn(w.lo);
    if (x >= w.hi) return fn(w.hi);
    if (auto j = Ec.gap_index(x)) {
      const Interval& g = Ec.gaps()[*j];
      const double t = (x - g.lo) / g.length();
      return (1.0 - t) * fn(g.lo) + t * fn(g.hi);
    }
    return fn(x);
  };
}

double kernel_constant() {
  static const double c = [] {
    const double half = quad::adaptive_simpson(sinc_pow, 0.0, kKernelSupport, 1e-12);
    return 1.0 / (2.0 * half);
  }();
  return c;
}

double kernel_value(double t) { return kernel_constant() * sinc_pow(t); }

double kernel_tail_mass(double u) {
  if (u >= kKernelSupport) return 0.0;
  const double inner =
      2.0 * quad::adaptive_simpson([](double t) { return kernel_value(t); }, 0.0,
                                   std::min(u, kKernelSupport), 1e-10);
  return std::max(0.0, 1.0 - inner);
}

BandlimitedApproximant kernel_approximant(const SampledFunction& f,
                                          const RealLineSet& E, double sigma) {
  if (!(sigma > 0.0)) throw structural_error("kernel approximant needs sigma > 0");
  const Interval& w = E.window();
  // Error measurement happens on the core window; by then the kernel tail
  // must have left the working window almost entirely.
  const double edge = 0.2 * w.length();
  if (kernel_tail_mass(sigma * edge) > 1e-6)
    throw window_error("kernel tails exceed the window at sigma = " +
                       std::to_string(sigma));

  RealFn fext = extend_linear(f, E);
  // Trapezoid in the kernel variable u = sigma (x - t), symmetric about the
  // evaluation point so odd kernel moments cancel exactly.
  const double du = M_PI / 2048.0;
  const int n = static_cast<int>(std::ceil(kKernelCut / du));
  std::vector<double> ku(n + 1);
  for (int i = 0; i <= n; ++i) ku[i] = kernel_value(i * du);

  BandlimitedApproximant g;
  g.type_bound = 100.0 * sigma;
  g.method = "kernel";
  g.sigma = sigma;
  g.window = w;
  g.eval = [fext, sigma, du, n, ku](double x) {
    double acc = ku[0] * fext(x);
    for (int i = 1; i <= n; ++i) {
      const double off = i * du / sigma;
      const double scale = (i == n) ? 0.5 : 1.0;
      acc += scale * ku[i] * (fext(x - off) + fext(x + off));
    }
    return acc * du;
  };
  return g;
}

std::vector<double> make_error_grid(const RealLineSet& E, double sigma,
                                    double core_inset, int pts_per_spacing,
                                    const std::vector<double>& features) {
  if (!(sigma > 0.0)) throw structural_error("error grid needs sigma > 0");
  const Interval& w = E.window();
  const double inset = core_inset * w.length();
  const Interval core{w.lo + inset, w.hi - inset};
  if (!(core.lo < core.hi)) throw structural_error("core window is empty");

  const double spacing = M_PI / sigma / pts_per_spacing;
  std::vector<double> grid;
  for (const Interval& isl : E.islands()) {
    const double lo = std::max(isl.lo, core.lo), hi = std::min(isl.hi, core.hi);
    if (!(hi > lo)) continue;
    const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / spacing)));
    for (int i = 0; i <= n; ++i) grid.push_back(lo + (hi - lo) * i / n);
    // 4x refinement near ends that touch a gap
    const double zone = std::min(0.25 * (hi - lo), M_PI / sigma);
    for (double end : {isl.lo, isl.hi}) {
      if (end == w.lo || end == w.hi) continue;  // window edge, not a gap
      if (end < lo || end > hi) continue;        // clipped off by the core
      const int r = 4 * std::max(1, static_cast<int>(std::ceil(zone / spacing)));
      for (int i = 1; i < r; ++i) {
        const double x = end + (end == isl.lo ? 1.0 : -1.0) * zone * i / r;
        if (x > lo && x < hi) grid.push_back(x);
      }
    }
  }
  for (double x0 : features) {
    if (!E.contains(x0, 1e-12) || x0 < core.lo || x0 > core.hi) continue;
    grid.push_back(x0);
    for (int m = 0; m <= 12; ++m) {
      const double off = spacing * std::ldexp(1.0, -m);
      for (double x : {x0 - off, x0 + off})
        if (E.contains(x) && x >= core.lo && x <= core.hi) grid.push_back(x);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) throw structural_error("error grid is empty");
  return grid;
}

int minimax_half_width(const RealLineSet& E, double sigma) {
  const double reach = std::max(std::abs(E.window().lo), std::abs(E.window().hi));
  return static_cast<int>(std::ceil(sigma * reach / M_PI));
}

std::pair<BandlimitedApproximant, double> minimax_approx(
    const SampledFunction& f, const RealLineSet& E, double sigma, int half_width,
    const std::vector<double>& grid, const MinimaxOptions& opt) {
  if (!(sigma > 0.0)) throw structural_error("minimax needs sigma > 0");
  if (grid.size() < 4) throw structural_error("minimax grid too small");
  const Interval& w = E.window();
  const double inset = opt.core_inset * w.length();
  for (double x : grid) {
    if (!E.contains(x, 1e-12))
      throw structural_error("minimax grid point outside the set");
    if (x < w.lo + inset - 1e-9 || x > w.hi - inset + 1e-9)
      throw structural_error("minimax grid point outside the core window");
  }
  if (half_width * M_PI / sigma <
      std::max(std::abs(w.lo), std::abs(w.hi)) - 1e-9)
    throw structural_error("basis half-width too small: nodes must span the window");

  const int m = static_cast<int>(grid.size());
  const int n = 2 * half_width + 1;
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd fv(m);
  for (int i = 0; i < m; ++i) {
    fv[i] = f.f(grid[i]);
    for (int k = -half_width; k <= half_width; ++k)
      A(i, k + half_width) = sinc(sigma * grid[i] - k * M_PI);
  }

  Eigen::VectorXd wgt = Eigen::VectorXd::Constant(m, 1.0 / m);
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_sup = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::MatrixXd As = wgt.cwiseSqrt().asDiagonal() * A;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    B.selfadjointView<Eigen::Lower>().rankUpdate(As.transpose());
    B = B.selfadjointView<Eigen::Lower>();
    B.diagonal().array() += 1e-13 * B.diagonal().maxCoeff() + 1e-300;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(B);
    if (ldlt.info() != Eigen::Success)
      throw conditioning_error("weighted normal equations not factorizable; "
                               "increase the node spacing");
    const Eigen::VectorXd c = ldlt.solve(A.transpose() * wgt.cwiseProduct(fv).matrix());
    if (!c.allFinite() || c.cwiseAbs().maxCoeff() > 1e12 * (1.0 + f.sup_norm))
      throw conditioning_error("sinc basis too collinear on this grid; "
                               "increase the node spacing");

    const Eigen::VectorXd err = (fv - A * c).cwiseAbs();
    const double sup = err.maxCoeff();
    if (sup < best_sup * (1.0 - 1e-6)) {
      since_best = 0;
    } else if (++since_best >= opt.stall_limit) {
      if (sup < best_sup) { best = c; best_sup = sup; }
      break;
    }
    if (sup < best_sup) { best = c; best_sup = sup; }

    Eigen::VectorXd next = wgt.cwiseProduct(err);
    const double total = next.sum();
    if (!(total > 0.0)) break;  // interpolated exactly
    next /= total;
    const double change = (next - wgt).cwiseAbs().maxCoeff();
    wgt = next;
    if (change < opt.weight_tol) break;
  }

  BandlimitedApproximant g;
  g.type_bound = sigma;
  g.method = "minimax";
  g.sigma = sigma;
  g.window = w;
  g.coeffs.assign(best.data(), best.data() + best.size());
  const int N = half_width;
  g.eval = [coeffs = g.coeffs, sigma, N](double x) {
    double acc = 0.0;
    for (int k = -N; k <= N; ++k)
      acc += coeffs[k + N] * sinc(sigma * x - k * M_PI);
    return acc;
  };
  return {std::move(g), best_sup};
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& sigma_error) {
  if (sigma_error.size() < 4)
    throw structural_error("rate fit needs at least 4 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(sigma_error.size());
  for (int i = 0; i < n; ++i) {
    const auto& [s, e] = sigma_error[i];
    if (i > 0 && !(s > sigma_error[i - 1].first))
      throw structural_error("rate fit needs strictly increasing sigma");
    if (!(e > 0.0)) throw structural_error("rate fit needs positive errors");
    const double x = std::log(s), y = std::log(e);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  RateFit fit;
  const double det = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (const auto& [s, e] : sigma_error) {
    const double r = std::log(e) - (fit.intercept + fit.slope * std::log(s));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

}  // namespace combline
