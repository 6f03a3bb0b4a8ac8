#include "combline/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace combline::quad {
namespace {

// Monic Jacobi recurrence p_{k+1} = (x - a_k) p_k - b_k p_{k-1} for the
// weight (1-x)^alpha (1+x)^beta.  b_1 uses the cancellation-free form so
// that alpha + beta = -1 (the Chebyshev case) does not divide 0/0.
Rule build_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
  if (alpha <= -1.0 || beta <= -1.0)
    throw std::invalid_argument("jacobi exponents must be > -1");

  const double ab = alpha + beta;
  Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 0);
  diag[0] = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    diag[k] = (beta * beta - alpha * alpha) / (t * (t + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    double bk;
    if (k == 1) {
      bk = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    } else {
      const double t = 2.0 * k + ab;
      bk = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (t * t * (t * t - 1.0));
    }
    sub[k - 1] = std::sqrt(bk);
  }

  const double mu0 = std::pow(2.0, ab + 1.0) * std::beta(alpha + 1.0, beta + 1.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("jacobi eigensolve failed");

  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    r.w[i] = mu0 * v0 * v0;
  }
  return r;
}

using Key = std::tuple<int, double, double>;
std::map<Key, std::unique_ptr<Rule>>& cache() {
  static std::map<Key, std::unique_ptr<Rule>> c;
  return c;
}
std::mutex cache_mutex;

}  // namespace

const Rule& gauss_jacobi(int n, double alpha, double beta) {
  const Key key{n, alpha, beta};
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache().find(key);
  if (it == cache().end())
    it = cache().emplace(key, std::make_unique<Rule>(build_jacobi(n, alpha, beta))).first;
  return *it->second;
}

const Rule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  const double scale = std::max(std::abs(whole), 1e-30);
  return adapt(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, max_depth);
}

double composite_simpson(const std::function<double(double)>& f, double a,
                         double b, int intervals) {
  if (a == b) return 0.0;
  const int n = std::max(2, intervals + (intervals & 1));
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i & 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace combline::quad
