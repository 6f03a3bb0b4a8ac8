#pragma once

#include <complex>
#include <string>
#include <vector>

#include "combline/realset.hpp"

namespace combline {

struct SolveOptions {
  double tol = 1e-12;   // accepted relative closure residual
  int quad_order = 32;  // base Gauss-Jacobi order; auto-doubled up to 256
  int max_sweeps = 100;
};

// Conformal map of the upper half plane onto the half plane minus one
// vertical slit (u_j, u_j + i v_j] per gap of E, normalized by φ(i) = i,
// φ(∞) = ∞.  Derivative form
//
//   φ'(w) = s · Π_j (w - c_j) · ((w - a_j)(w - b_j))^{-1/2},
//
// with one tip preimage c_j per gap solving the closure condition
// ∫_{a_j}^{c_j} |φ'| = ∫_{c_j}^{b_j} |φ'| (travel up the slit equals travel
// back down).  Square roots take limits from the upper half plane, so φ' is
// positive on the complement of the gaps and purely imaginary on the gaps.
class LevinMap {
 public:
  const RealLineSet& set() const { return set_; }
  const std::vector<double>& tip_preimages() const { return c_; }
  const std::vector<double>& slit_bases() const { return u_; }
  const std::vector<double>& slit_heights() const { return v_; }
  double scale() const { return s_; }
  double offset() const { return t_; }
  // Relative closure residual per gap, measured with quadrature at 4x the
  // solve order.
  const std::vector<double>& closure_residuals() const { return resid_; }
  int quad_order() const { return order_; }

  // φ(z) for Im z ≥ 0.  Real z inside a gap lands on the slit at the height
  // reached after walking |∫_{a_j}^{z} φ'| along it (up, then down past the
  // tip), which matches both one-sided boundary limits.
  std::complex<double> evaluate(std::complex<double> z) const;

  // φ(x) for real x in E; fast path along the axis.
  double boundary_value(double x) const;

  // Normalized φ'(z).
  std::complex<double> derivative(std::complex<double> z) const;

  // diam φ([x1, x2]): the image is a real segment plus the slits over the
  // gaps between x1 and x2, so the diameter is the largest pairwise distance
  // among the two image endpoints and the slit tips.
  double rho(double x1, double x2) const;

  // |φ(x) - φ(x + iδ)| by integration up the vertical segment.
  double vertical_displacement(double x, double delta) const;

  // Numerical inverse by Newton iteration; diagnostics only.
  std::complex<double> invert(std::complex<double> w) const;

  void save(const std::string& path) const;
  static LevinMap load(const std::string& path, int quad_order = 32);

 private:
  friend LevinMap solve_parameters(const RealLineSet& E, const SolveOptions& opt);
  LevinMap(RealLineSet set, int order) : set_(std::move(set)), order_(order) {}

  // Unnormalized map φ0 (s = 1, anchor value φ0(w_lo) = 0).
  std::complex<double> phi0_prime(std::complex<double> w) const;
  std::complex<double> phi0_prime_skip(std::complex<double> w, double skip) const;
  double reduced_abs(double x, double skip0, double skip1) const;
  double real_segment(double p, double q, bool sing_p, bool sing_q, int order) const;
  double pos0(double x) const;
  double arc_length0(int j, double x) const;
  std::complex<double> interior0(std::complex<double> z) const;
  std::complex<double> vertical_integral0(double x, double delta) const;
  double nearest_prevertex_gap(double x) const;
  void build_tables(int order);
  void normalize();

  RealLineSet set_;
  std::vector<double> c_;
  std::vector<double> u_;
  std::vector<double> v_;
  double s_ = 1.0;
  double t_ = 0.0;
  std::vector<double> resid_;
  int order_ = 32;

  // Walk table along the axis, unnormalized: φ0(a_j) (= φ0(b_j) by
  // closure), the two half-slit travel integrals per gap, and φ0(w_hi).
  std::vector<double> pos_a_;
  std::vector<double> up_;
  std::vector<double> down_;
  double pos_whi_ = 0.0;
};

LevinMap solve_parameters(const RealLineSet& E, const SolveOptions& opt = {});

inline std::complex<double> evaluate(const LevinMap& m, std::complex<double> z) {
  return m.evaluate(z);
}
inline double rho(const LevinMap& m, double x1, double x2) { return m.rho(x1, x2); }
inline double vertical_displacement(const LevinMap& m, double x, double delta) {
  return m.vertical_displacement(x, delta);
}

}  // namespace combline
