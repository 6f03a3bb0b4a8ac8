#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "combline/realset.hpp"

namespace combline {

// Explicit geometric distance between two points of E.  With J_j the gap
// whose inflation contains both points, d the distance from [x1, x2] to J_j,
// and D = |x2 - x1|:
//   case 1 (D < d):                       (|J_j| / d)^{1/2} D
//   case 2 (d <= D <= (C/2)|J_j|):        (|J_j| D)^{1/2}
//   otherwise:                            D
// Cases fall through strictly in this order.
double tau(const RealLineSet& E, double x1, double x2);

// Nondecreasing modulus-type function with ω(+0) = 0 satisfying the
// doubling condition ω(tδ) ≤ 2t ω(δ) for t > 1.
class ModulusFunction {
 public:
  // A δ^α with A > 0, 0 < α < 1 (doubling holds automatically).
  static ModulusFunction power(double A, double alpha);
  // Piecewise-linear through (0,0) and nondecreasing samples; constant after
  // the last sample.  The doubling condition is spot-checked on a grid.
  static ModulusFunction table(std::vector<double> delta, std::vector<double> value);

  double operator()(double delta) const;

 private:
  ModulusFunction() = default;
  bool is_power_ = true;
  double A_ = 1.0, alpha_ = 0.5;
  std::vector<double> td_, tv_;
};

// Ω(δ) = δ (||f|| + ∫_δ^1 ω(t)/t² dt) for δ ≤ 1/2, frozen at Ω(1/2) beyond.
class OmegaMajorant {
 public:
  OmegaMajorant(ModulusFunction omega, double f_norm);
  double operator()(double delta) const;

 private:
  ModulusFunction omega_;
  double f_norm_;
  double cap_;  // Ω(1/2)
};

double omega_majorant(const ModulusFunction& omega, double f_norm, double delta);

// Deterministic point pool for modulus estimation: a uniform bulk grid over
// every island plus geometric ladders at distances |J_j| 2^{-m}, m = 0..
// geo_levels, off both endpoints of every gap (endpoints themselves
// included).  Sorted, deduplicated, all points in E.
struct PointPool {
  std::vector<double> points;
};
PointPool make_point_pool(const RealLineSet& E, int bulk_points = 300,
                          int geo_levels = 20);

using RealFn = std::function<double(double)>;
using DistanceFn = std::function<double(double, double)>;

// Lower estimate of ω*(δ) = sup {|f(x2) - f(x1)| : dist(x1, x2) ≤ δ} over
// all pairs from one shared pool, queryable at any δ.  Monotone in δ by
// construction.
class OmegaStarCurve {
 public:
  OmegaStarCurve(const RealFn& f, const DistanceFn& dist, const PointPool& pool);

  double operator()(double delta) const;
  std::size_t pair_count() const { return dist_.size(); }

 private:
  std::vector<double> dist_;    // pair distances, ascending
  std::vector<double> spread_;  // running max of |f(x2) - f(x1)|
};

// ω* at each δ of `deltas` over one shared pool.
std::vector<double> omega_star(const RealFn& f, const DistanceFn& dist,
                               const PointPool& pool,
                               const std::vector<double>& deltas);

}  // namespace combline
