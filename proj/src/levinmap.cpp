#include "combline/levinmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "combline/errors.hpp"
#include "combline/quadrature.hpp"

namespace combline {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMembershipTol = 1e-12;
constexpr int kMaxOrder = 256;

std::complex<double> clamp_upper(std::complex<double> w) {
  return {w.real(), w.imag() < 0.0 ? 0.0 : w.imag()};
}

}  // namespace

std::complex<double> LevinMap::phi0_prime(std::complex<double> w) const {
  w = clamp_upper(w);
  std::complex<double> num = 1.0, den = 1.0;
  const auto& gaps = set_.gaps();
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    num *= w - c_[j];
    den *= std::sqrt(w - gaps[j].lo) * std::sqrt(w - gaps[j].hi);
  }
  return num / den;
}

std::complex<double> LevinMap::phi0_prime_skip(std::complex<double> w, double skip) const {
  w = clamp_upper(w);
  std::complex<double> num = 1.0, den = 1.0;
  const auto& gaps = set_.gaps();
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    num *= w - c_[j];
    if (gaps[j].lo != skip) den *= std::sqrt(w - gaps[j].lo);
    if (gaps[j].hi != skip) den *= std::sqrt(w - gaps[j].hi);
  }
  return num / den;
}

// |φ0'(x)| for real x outside the gaps, with the inverse-square-root factors
// belonging to skip0/skip1 left out (they are absorbed into the quadrature
// weight by the caller).
double LevinMap::reduced_abs(double x, double skip0, double skip1) const {
  double r = 1.0;
  const auto& gaps = set_.gaps();
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    r *= std::abs(x - c_[j]);
    for (double e : {gaps[j].lo, gaps[j].hi}) {
      if (e == skip0 || e == skip1) continue;
      r /= std::sqrt(std::abs(x - e));
    }
  }
  return r;
}

// ∫_p^q |φ0'| dx where sing_p / sing_q mark endpoints that are prevertices;
// their x^{-1/2} behavior goes into the Gauss-Jacobi weight.
double LevinMap::real_segment(double p, double q, bool sing_p, bool sing_q,
                              int order) const {
  if (p == q) return 0.0;
  const auto& r = quad::gauss_jacobi(order, sing_q ? -0.5 : 0.0, sing_p ? -0.5 : 0.0);
  const double mid = 0.5 * (p + q), half = 0.5 * (q - p);
  const double skip0 = sing_p ? p : kNaN;
  const double skip1 = sing_q ? q : kNaN;
  double acc = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    acc += r.w[i] * reduced_abs(mid + half * r.x[i], skip0, skip1);
  const double expo = 1.0 - 0.5 * (sing_p ? 1 : 0) - 0.5 * (sing_q ? 1 : 0);
  return std::pow(half, expo) * acc;
}

double LevinMap::nearest_prevertex_gap(double x) const {
  double d = kInf;
  for (const Interval& g : set_.gaps())
    d = std::min({d, std::abs(x - g.lo), std::abs(x - g.hi)});
  return d;
}

void LevinMap::build_tables(int order) {
  order_ = order;
  const auto& gaps = set_.gaps();
  const int k = static_cast<int>(gaps.size());
  pos_a_.assign(k, 0.0);
  up_.assign(k, 0.0);
  down_.assign(k, 0.0);
  double pos = 0.0, left = set_.window().lo;
  for (int j = 0; j < k; ++j) {
    pos += real_segment(left, gaps[j].lo, j > 0, true, order);
    pos_a_[j] = pos;
    up_[j] = real_segment(gaps[j].lo, c_[j], true, false, order);
    down_[j] = real_segment(c_[j], gaps[j].hi, false, true, order);
    left = gaps[j].hi;
  }
  pos_whi_ = pos + real_segment(left, set_.window().hi, k > 0, false, order);

  const int fine = std::min(4 * order, 2 * kMaxOrder);
  resid_.assign(k, 0.0);
  for (int j = 0; j < k; ++j) {
    const double a4 = real_segment(gaps[j].lo, c_[j], true, false, fine);
    const double b4 = real_segment(c_[j], gaps[j].hi, false, true, fine);
    resid_[j] = std::abs(a4 - b4) / (a4 + b4);
  }
}

void LevinMap::normalize() {
  s_ = 1.0;
  t_ = 0.0;
  const std::complex<double> fi = interior0({0.0, 1.0});
  if (!(fi.imag() > 0.0))
    throw solver_error("normalization failed: Im φ0(i) <= 0", resid_);
  s_ = 1.0 / fi.imag();
  t_ = -s_ * fi.real();
  const int k = set_.gap_count();
  u_.assign(k, 0.0);
  v_.assign(k, 0.0);
  for (int j = 0; j < k; ++j) {
    u_[j] = t_ + s_ * pos_a_[j];
    v_[j] = s_ * up_[j];
  }
}

double LevinMap::pos0(double x) const {
  const auto& gaps = set_.gaps();
  const int k = static_cast<int>(gaps.size());
  const Interval& w = set_.window();
  if (x < w.lo || x > w.hi) {
    // Diagnostic extension beyond the window: composite legs whose length
    // tracks the (growing) distance to the prevertices.
    double acc, cur, target;
    int dir;
    if (x < w.lo) {
      acc = 0.0, cur = w.lo, target = x, dir = -1;
    } else {
      acc = pos_whi_, cur = w.hi, target = x, dir = +1;
    }
    while (cur != target) {
      const double d = std::min(nearest_prevertex_gap(cur), 16.0);
      const double step = std::min(std::abs(target - cur), std::max(0.5 * d, 0.25));
      const double nxt = cur + dir * step;
      const double piece = real_segment(std::min(cur, nxt), std::max(cur, nxt),
                                        false, false, order_);
      acc += dir * piece;
      cur = nxt;
    }
    return acc;
  }
  if (set_.gap_index(x))
    throw std::domain_error("pos0: point lies inside a gap");
  // Locate the island [L, R] around x and integrate from the nearer end.
  double L = w.lo, R = w.hi, posL = 0.0, posR = pos_whi_;
  bool singL = false, singR = false;
  for (int j = 0; j < k; ++j) {
    if (x <= gaps[j].lo) {
      R = gaps[j].lo;
      posR = pos_a_[j];
      singR = true;
      break;
    }
    L = gaps[j].hi;
    posL = pos_a_[j];
    singL = true;
  }
  if (x - L <= R - x)
    return posL + real_segment(L, x, singL, false, order_);
  return posR - real_segment(x, R, false, singR, order_);
}

double LevinMap::arc_length0(int j, double x) const {
  const Interval& g = set_.gaps()[j];
  if (x <= c_[j]) {
    if (x - g.lo <= c_[j] - x)
      return real_segment(g.lo, x, true, false, order_);
    return up_[j] - real_segment(x, c_[j], false, false, order_);
  }
  if (x - c_[j] <= g.hi - x)
    return up_[j] + real_segment(c_[j], x, false, false, order_);
  return up_[j] + down_[j] - real_segment(x, g.hi, false, true, order_);
}

std::complex<double> LevinMap::interior0(std::complex<double> z) const {
  const double zr = z.real();
  const double zi = std::max(0.0, z.imag());
  double maxgap = 0.0;
  for (const Interval& g : set_.gaps()) maxgap = std::max(maxgap, g.length());
  const double hsafe = std::max(1.0, maxgap);
  const double big = std::max(hsafe, zi);
  const double xr = set_.window().lo;
  const auto& gl = quad::gauss_legendre(order_);
  auto f = [this](std::complex<double> w) { return phi0_prime(w); };

  std::complex<double> acc = 0.0;
  // Up the anchor column; the anchor sits a full margin away from every
  // prevertex, so the first leg can span that distance at once.
  double h = std::min(big, std::max(std::min(nearest_prevertex_gap(xr), big), 1e-3));
  acc += quad::segment(f, {xr, 0.0}, {xr, h}, gl);
  while (h < big) {
    const double nxt = std::min(big, 2.0 * h);
    acc += quad::segment(f, {xr, h}, {xr, nxt}, gl);
    h = nxt;
  }
  // Across at the safe height, legs no longer than the height itself.
  const int legs = std::max(1, static_cast<int>(std::ceil(std::abs(zr - xr) / big)));
  for (int i = 0; i < legs; ++i) {
    const double x0 = xr + (zr - xr) * i / legs;
    const double x1 = xr + (zr - xr) * (i + 1) / legs;
    acc += quad::segment(f, {x0, big}, {x1, big}, gl);
  }
  // Down the target column, halving the height each leg.
  h = big;
  while (h > zi) {
    double nxt;
    if (zi > 0.0) {
      nxt = std::max(zi, 0.5 * h);
    } else {
      const double dh = nearest_prevertex_gap(zr);
      nxt = (h <= 0.5 * dh) ? 0.0 : 0.5 * h;
    }
    acc += quad::segment(f, {zr, h}, {zr, nxt}, gl);
    h = nxt;
  }
  return acc;
}

std::complex<double> LevinMap::vertical_integral0(double x, double delta) const {
  const auto& gl = quad::gauss_legendre(order_);
  auto f = [this](std::complex<double> w) { return phi0_prime(w); };
  std::complex<double> acc = 0.0;
  double h;

  // Snap to a prevertex when the base point is one; the inverse square root
  // of the skipped factor becomes the (1+t)^{-1/2} Jacobi weight.
  double snap = kNaN, d2 = kInf;
  for (const Interval& g : set_.gaps()) {
    for (double e : {g.lo, g.hi}) {
      if (std::abs(x - e) <= kMembershipTol * std::max(1.0, std::abs(e))) snap = e;
    }
  }
  if (!std::isnan(snap)) {
    for (const Interval& g : set_.gaps())
      for (double e : {g.lo, g.hi})
        if (e != snap) d2 = std::min(d2, std::abs(snap - e));
    h = std::min(delta, 0.5 * std::min(d2, 2.0));
    const auto& gj = quad::gauss_jacobi(order_, 0.0, -0.5);
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < gj.x.size(); ++i) {
      const double t = 0.5 * h * (1.0 + gj.x[i]);
      sum += gj.w[i] * phi0_prime_skip({snap, t}, snap);
    }
    // ∫0^h g(t) (it)^{-1/2} i dt = i e^{-iπ/4} (h/2)^{1/2} Σ w g
    const std::complex<double> phase =
        std::complex<double>(0.0, 1.0) * std::polar(1.0, -0.25 * M_PI);
    acc = phase * std::sqrt(0.5 * h) * sum;
    x = snap;
  } else {
    const double d = nearest_prevertex_gap(x);
    h = std::min(delta, 0.5 * std::min(d, 2.0));
    acc = quad::segment(f, {x, 0.0}, {x, h}, gl);
  }
  while (h < delta) {
    const double nxt = std::min(delta, 2.0 * h);
    acc += quad::segment(f, {x, h}, {x, nxt}, gl);
    h = nxt;
  }
  return acc;
}

std::complex<double> LevinMap::evaluate(std::complex<double> z) const {
  if (z.imag() < 0.0)
    throw std::domain_error("evaluate: point below the real axis");
  if (z.imag() == 0.0) {
    const double x = z.real();
    if (auto j = set_.gap_index(x)) {
      const double ell = arc_length0(*j, x);
      const double height =
          ell <= up_[*j] ? ell : std::max(0.0, up_[*j] + down_[*j] - ell);
      return {u_[*j], s_ * height};
    }
    return {boundary_value(x), 0.0};
  }
  return t_ + s_ * interior0(z);
}

double LevinMap::boundary_value(double x) const {
  return t_ + s_ * pos0(x);
}

std::complex<double> LevinMap::derivative(std::complex<double> z) const {
  return s_ * phi0_prime(z);
}

double LevinMap::rho(double x1, double x2) const {
  if (x1 > x2) std::swap(x1, x2);
  if (!set_.contains(x1, kMembershipTol) || !set_.contains(x2, kMembershipTol))
    throw std::domain_error("rho: both points must lie in the set");
  if (x1 == x2) return 0.0;
  const double p1 = pos0(x1), p2 = pos0(x2);
  std::vector<std::complex<double>> pts{{p1, 0.0}, {p2, 0.0}};
  const auto& gaps = set_.gaps();
  for (int j = 0; j < set_.gap_count(); ++j)
    if (gaps[j].lo >= x1 && gaps[j].hi <= x2)
      pts.emplace_back(pos_a_[j], up_[j]);
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = i + 1; k < pts.size(); ++k)
      diam = std::max(diam, std::abs(pts[i] - pts[k]));
  return s_ * diam;
}

double LevinMap::vertical_displacement(double x, double delta) const {
  if (!(delta > 0.0))
    throw std::domain_error("vertical_displacement: delta must be positive");
  if (!set_.contains(x, kMembershipTol))
    throw std::domain_error("vertical_displacement: x must lie in the set");
  return s_ * std::abs(vertical_integral0(x, delta));
}

std::complex<double> LevinMap::invert(std::complex<double> w) const {
  std::complex<double> z = w.imag() > 0.1 ? w : w + std::complex<double>(0.0, 0.5);
  for (int it = 0; it < 60; ++it) {
    const std::complex<double> fz = evaluate(z) - w;
    if (std::abs(fz) <= 1e-12 * (1.0 + std::abs(w))) return z;
    std::complex<double> step = fz / derivative(z);
    // keep the iterate inside H where evaluate is defined
    while (z.imag() - step.imag() < 1e-12) step *= 0.5;
    z -= step;
  }
  throw structural_error("invert: Newton iteration did not converge");
}

LevinMap solve_parameters(const RealLineSet& E, const SolveOptions& opt) {
  for (const Interval& isl : E.islands()) {
    if (!(isl.length() > 0.0))
      throw resolution_error("touching gaps leave no island between prevertices");
  }
  const auto& gaps = E.gaps();
  const int k = static_cast<int>(gaps.size());

  int order = opt.quad_order;
  while (true) {
    LevinMap m(E, order);
    m.c_.resize(k);
    for (int j = 0; j < k; ++j) m.c_[j] = gaps[j].center();

    // Gauss-Seidel sweeps.  For fixed other tips, the closure residual of
    // gap j is affine in c_j, so the inner update is exact: c_j is the
    // centroid of the gap under the weight |φ0'| / |x - c_j|.
    const auto& gj = quad::gauss_jacobi(order, -0.5, -0.5);
    bool converged = false;
    for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
      double move = 0.0;
      for (int j = 0; j < k; ++j) {
        const double mid = gaps[j].center(), half = 0.5 * gaps[j].length();
        double m0 = 0.0, m1 = 0.0;
        for (std::size_t i = 0; i < gj.x.size(); ++i) {
          const double x = mid + half * gj.x[i];
          double g = 1.0;
          for (int q = 0; q < k; ++q) {
            if (q == j) continue;
            g *= std::abs(x - m.c_[q]) /
                 std::sqrt(std::abs(x - gaps[q].lo) * std::abs(x - gaps[q].hi));
          }
          m0 += gj.w[i] * g;
          m1 += gj.w[i] * g * (x - mid);
        }
        const double next = mid + m1 / m0;
        move = std::max(move, std::abs(next - m.c_[j]) / gaps[j].length());
        m.c_[j] = next;
      }
      converged = move < 1e-14;
    }
    m.build_tables(order);
    if (!converged)
      throw solver_error("tip iteration did not converge", m.resid_);

    bool resolved = true;
    for (int j = 0; j < k; ++j)
      if (!(m.resid_[j] < std::max(opt.tol, 1e-10))) resolved = false;
    // Island travel must also be stable against refinement.
    {
      const int fine = std::min(4 * order, 2 * kMaxOrder);
      double pos = 0.0, left = E.window().lo;
      for (int j = 0; j < k; ++j) {
        pos += m.real_segment(left, gaps[j].lo, j > 0, true, fine);
        left = gaps[j].hi;
      }
      pos += m.real_segment(left, E.window().hi, k > 0, false, fine);
      if (std::abs(pos - m.pos_whi_) > 1e-9 * std::abs(pos)) resolved = false;
    }
    if (!resolved) {
      if (order >= kMaxOrder)
        throw resolution_error("quadrature order " + std::to_string(order) +
                               " cannot resolve the gap geometry");
      order *= 2;
      continue;
    }

    m.normalize();

    // Postconditions: normalization reproduced and boundary monotone.
    const std::complex<double> at_i = m.evaluate({0.0, 1.0});
    if (std::abs(at_i - std::complex<double>(0.0, 1.0)) > 1e-9)
      throw solver_error("normalization check failed", m.resid_);
    double prev = -kInf;
    const auto islands = E.islands();
    for (const Interval& isl : islands) {
      for (int i = 0; i <= 8; ++i) {
        const double x = isl.lo + isl.length() * i / 8.0;
        const double p = m.pos0(x);
        if (!(p >= prev - 1e-12)) throw solver_error("boundary value not monotone", m.resid_);
        prev = p;
      }
    }
    return m;
  }
}

void LevinMap::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw structural_error("cannot open " + path + " for writing");
  char buf[256];
  std::snprintf(buf, sizeof buf, "window %.17g %.17g\n", set_.window().lo,
                set_.window().hi);
  out << buf;
  for (int j = 0; j < set_.gap_count(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g\n",
                  set_.gaps()[j].lo, set_.gaps()[j].hi, c_[j], u_[j], v_[j]);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "scale %.17g offset %.17g\n", s_, t_);
  out << buf;
  out << "residuals";
  for (double r : resid_) {
    std::snprintf(buf, sizeof buf, " %.17g", r);
    out << buf;
  }
  out << "\n";
  if (!out) throw structural_error("failed writing " + path);
}

LevinMap LevinMap::load(const std::string& path, int quad_order) {
  std::ifstream in(path);
  if (!in) throw structural_error("cannot open map file " + path);
  std::string line;
  bool have_window = false, have_scale = false;
  Interval window;
  double s = 1.0, t = 0.0;
  std::vector<Interval> gaps;
  std::vector<double> cs, us, vs;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first) || first[0] == '#') continue;
    if (first == "window") {
      if (!(ss >> window.lo >> window.hi))
        throw structural_error(path + ":" + std::to_string(lineno) + ": bad window line");
      have_window = true;
    } else if (first == "scale") {
      std::string kw;
      if (!(ss >> s >> kw >> t) || kw != "offset")
        throw structural_error(path + ":" + std::to_string(lineno) + ": bad scale line");
      have_scale = true;
    } else if (first == "residuals") {
      // informational; recomputed below
    } else {
      Interval g;
      double c, u, v;
      try {
        g.lo = std::stod(first);
      } catch (const std::exception&) {
        throw structural_error(path + ":" + std::to_string(lineno) + ": expected a number");
      }
      if (!(ss >> g.hi >> c >> u >> v))
        throw structural_error(path + ":" + std::to_string(lineno) +
                               ": gap line needs five numbers");
      gaps.push_back(g);
      cs.push_back(c);
      us.push_back(u);
      vs.push_back(v);
    }
  }
  if (!have_window || !have_scale)
    throw structural_error(path + ": missing window or scale line");

  LevinMap m(RealLineSet(std::move(gaps), window), quad_order);
  m.c_ = std::move(cs);
  m.build_tables(quad_order);
  m.s_ = s;
  m.t_ = t;
  const int k = m.set_.gap_count();
  m.u_.assign(k, 0.0);
  m.v_.assign(k, 0.0);
  for (int j = 0; j < k; ++j) {
    m.u_[j] = m.t_ + m.s_ * m.pos_a_[j];
    m.v_[j] = m.s_ * m.up_[j];
    const double tol = 1e-6 * (1.0 + std::abs(us[j]) + vs[j]);
    if (std::abs(m.u_[j] - us[j]) > tol || std::abs(m.v_[j] - vs[j]) > tol)
      throw structural_error(path + ": stored slit data inconsistent with gap data");
  }
  return m;
}

}  // namespace combline
