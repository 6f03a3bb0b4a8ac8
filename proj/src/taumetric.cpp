#include "combline/taumetric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "combline/errors.hpp"
#include "combline/quadrature.hpp"

namespace combline {
namespace {

constexpr double kMembershipTol = 1e-12;

double interval_distance(double lo, double hi, const Interval& g) {
  if (hi <= g.lo) return g.lo - hi;
  if (lo >= g.hi) return lo - g.hi;
  return 0.0;
}

}  // namespace

double tau(const RealLineSet& E, double x1, double x2) {
  if (!E.contains(x1, kMembershipTol) || !E.contains(x2, kMembershipTol))
    throw std::domain_error("tau: both points must lie in the set");
  if (x1 == x2) return 0.0;
  const double lo = std::min(x1, x2), hi = std::max(x1, x2);
  const double D = hi - lo;

  const auto j1 = E.tilde_index(lo);
  if (j1 && j1 == E.tilde_index(hi)) {
    const Interval& J = E.gaps()[*j1];
    const double len = J.length();
    const double d = interval_distance(lo, hi, J);
    if (D < d) return std::sqrt(len / d) * D;
    if (D <= 0.5 * E.c_tilde() * len) return std::sqrt(len * D);
  }
  return D;
}

ModulusFunction ModulusFunction::power(double A, double alpha) {
  if (!(A > 0.0) || !(alpha > 0.0) || !(alpha < 1.0))
    throw structural_error("power modulus needs A > 0 and 0 < alpha < 1");
  ModulusFunction m;
  m.is_power_ = true;
  m.A_ = A;
  m.alpha_ = alpha;
  return m;
}

ModulusFunction ModulusFunction::table(std::vector<double> delta,
                                       std::vector<double> value) {
  if (delta.size() != value.size() || delta.empty())
    throw structural_error("tabulated modulus needs matching nonempty samples");
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (!(delta[i] > 0.0) || value[i] < 0.0)
      throw structural_error("tabulated modulus samples must be positive/nonnegative");
    if (i > 0 && (delta[i] <= delta[i - 1] || value[i] < value[i - 1]))
      throw structural_error("tabulated modulus samples must be increasing/nondecreasing");
  }
  ModulusFunction m;
  m.is_power_ = false;
  m.td_ = std::move(delta);
  m.tv_ = std::move(value);
  // Spot-check the doubling condition on a log grid of (t, delta).
  for (double t : {1.5, 2.0, 4.0, 10.0, 50.0}) {
    for (double d : m.td_) {
      if (m(t * d) > 2.0 * t * m(d) + 1e-12)
        throw structural_error("tabulated modulus violates the doubling condition");
    }
  }
  return m;
}

double ModulusFunction::operator()(double delta) const {
  if (delta <= 0.0) return 0.0;
  if (is_power_) return A_ * std::pow(delta, alpha_);
  auto it = std::lower_bound(td_.begin(), td_.end(), delta);
  if (it == td_.end()) return tv_.back();
  const std::size_t i = it - td_.begin();
  const double d0 = i == 0 ? 0.0 : td_[i - 1];
  const double v0 = i == 0 ? 0.0 : tv_[i - 1];
  const double f = (delta - d0) / (td_[i] - d0);
  return v0 + f * (tv_[i] - v0);
}

OmegaMajorant::OmegaMajorant(ModulusFunction omega, double f_norm)
    : omega_(std::move(omega)), f_norm_(f_norm) {
  if (f_norm < 0.0) throw structural_error("sup-norm must be nonnegative");
  cap_ = 0.0;
  cap_ = (*this)(0.5);
}

double OmegaMajorant::operator()(double delta) const {
  if (!(delta > 0.0)) throw structural_error("omega majorant needs delta > 0");
  if (delta > 0.5 && cap_ > 0.0) return cap_;
  if (delta > 0.5) delta = 0.5;  // only during construction of the cap
  const double tail = quad::adaptive_simpson(
      [this](double t) { return omega_(t) / (t * t); }, delta, 1.0, 1e-8);
  return delta * (f_norm_ + tail);
}

double omega_majorant(const ModulusFunction& omega, double f_norm, double delta) {
  return OmegaMajorant(omega, f_norm)(delta);
}

PointPool make_point_pool(const RealLineSet& E, int bulk_points, int geo_levels) {
  if (bulk_points < 2) throw structural_error("point pool needs at least 2 bulk points");
  std::vector<double> pts;
  const auto islands = E.islands();
  double total = 0.0;
  for (const Interval& s : islands) total += s.length();
  for (const Interval& s : islands) {
    if (!(s.length() > 0.0)) continue;
    const int n = std::max(2, static_cast<int>(bulk_points * s.length() / total));
    for (int i = 0; i <= n; ++i)
      pts.push_back(s.lo + s.length() * i / n);
  }
  for (const Interval& g : E.gaps()) {
    pts.push_back(g.lo);
    pts.push_back(g.hi);
    for (int m = 0; m <= geo_levels; ++m) {
      const double off = g.length() * std::ldexp(1.0, -m);
      for (double x : {g.lo - off, g.hi + off})
        if (E.contains(x)) pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) throw structural_error("point pool is empty");
  return PointPool{std::move(pts)};
}

OmegaStarCurve::OmegaStarCurve(const RealFn& f, const DistanceFn& dist,
                               const PointPool& pool) {
  const auto& p = pool.points;
  if (p.size() < 2) throw structural_error("point pool too small for pairs");
  std::vector<double> fv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) fv[i] = f(p[i]);

  std::vector<std::pair<double, double>> pairs;  // (distance, |df|)
  pairs.reserve(p.size() * (p.size() - 1) / 2);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t k = i + 1; k < p.size(); ++k)
      pairs.emplace_back(dist(p[i], p[k]), std::abs(fv[k] - fv[i]));
  std::sort(pairs.begin(), pairs.end());

  dist_.resize(pairs.size());
  spread_.resize(pairs.size());
  double running = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    dist_[i] = pairs[i].first;
    running = std::max(running, pairs[i].second);
    spread_[i] = running;
  }
}

double OmegaStarCurve::operator()(double delta) const {
  if (!(delta > 0.0)) throw structural_error("omega_star needs delta > 0");
  auto it = std::upper_bound(dist_.begin(), dist_.end(), delta);
  if (it == dist_.begin()) return 0.0;
  return spread_[(it - dist_.begin()) - 1];
}

std::vector<double> omega_star(const RealFn& f, const DistanceFn& dist,
                               const PointPool& pool,
                               const std::vector<double>& deltas) {
  OmegaStarCurve curve(f, dist, pool);
  std::vector<double> out;
  out.reserve(deltas.size());
  for (double d : deltas) out.push_back(curve(d));
  return out;
}

}  // namespace combline
