#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace combline::quad {

struct Rule {
  std::vector<double> x;  // nodes in (-1, 1), ascending
  std::vector<double> w;  // positive weights
};

// Gauss-Legendre rule of order n.  Cached; the reference stays valid.
const Rule& gauss_legendre(int n);

// Gauss-Jacobi rule of order n for the weight (1-x)^alpha (1+x)^beta on
// [-1, 1], alpha, beta > -1.  Nodes and weights via Golub-Welsch on the
// symmetric tridiagonal matrix of the three-term recurrence.
const Rule& gauss_jacobi(int n, double alpha, double beta);

// ∫_a^b f, adaptive Simpson with Richardson control.  rel_tol is relative to
// the accumulated integral (plus an absolute floor to survive f ≡ 0).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, int max_depth = 48);

// ∫_a^b f on a fixed uniform grid (intervals rounded up to even); used where
// an error estimate independent of the adaptive driver is wanted.
double composite_simpson(const std::function<double(double)>& f, double a,
                         double b, int intervals);

// ∫ f(z) dz along the straight segment [za, zb] with a fixed rule.
template <class F>
std::complex<double> segment(F&& f, std::complex<double> za,
                             std::complex<double> zb, const Rule& r) {
  const std::complex<double> mid = 0.5 * (za + zb);
  const std::complex<double> half = 0.5 * (zb - za);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    acc += r.w[i] * f(mid + half * r.x[i]);
  return half * acc;
}

}  // namespace combline::quad
