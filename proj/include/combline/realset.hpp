#pragma once

#include <optional>
#include <string>
#include <vector>

namespace combline {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

struct GeometryReport {
  double c1 = 0.0;  // longest gap
  double c2 = 0.0;  // max over gaps j of sum_{k != j} (|J_k| / d(J_k, J_j))^2
  double c5 = 0.0;  // c2^{-1/2}; +inf when no other gap contributes
  bool tilde_disjoint = true;
  bool valid = false;
  double threshold_c1 = 0.0;
  double threshold_c2 = 0.0;
};

// Closed subset of the line described as a working window minus finitely many
// open gaps.  Gaps are in ascending order, pairwise disjoint as open
// intervals (shared endpoints allowed), and lie strictly inside the window.
class RealLineSet {
 public:
  // c_tilde <= 0 requests the default inflation constant
  // 0.4 * min(1, c5 / 2); an explicit value must satisfy
  // 0 < c_tilde < min(1, c5 / 2).
  RealLineSet(std::vector<Interval> gaps, Interval window, double c_tilde = 0.0);

  const std::vector<Interval>& gaps() const { return gaps_; }
  const Interval& window() const { return window_; }
  double c_tilde() const { return c_tilde_; }
  int gap_count() const { return static_cast<int>(gaps_.size()); }

  // Complement pieces inside the window, ascending; gap_count() + 1 of them.
  // Zero-length pieces appear exactly where two gaps share an endpoint.
  std::vector<Interval> islands() const;

  bool contains(double x, double tol = 0.0) const;
  std::optional<int> gap_index(double x) const;

  // Inflated gap: same center, length (1 + c_tilde) * |J_j|.
  Interval tilde_gap(int j) const;
  // The inflated gaps are pairwise disjoint for any admissible c_tilde, so
  // the containing index is unique when it exists.
  std::optional<int> tilde_index(double x) const;

  void save(const std::string& path) const;
  static RealLineSet load(const std::string& path, double c_tilde = 0.0);

 private:
  std::vector<Interval> gaps_;
  Interval window_;
  double c_tilde_;
};

GeometryReport validate_geometry(const RealLineSet& set,
                                 double threshold_c1 = 10.0,
                                 double threshold_c2 = 10.0);

// Periodic comb: islands of length `island` at spacing island + gap, l
// running over [l_lo, l_hi]; the window adds a margin of ten gap lengths.
RealLineSet example1(int l_lo = -20, int l_hi = 20, double island = 2.0,
                     double gap = 1.0);

// Gaps accumulating at the even integers 2j:
//   (2j + 2^{-k}(1 - 1/k), 2j + 2^{-k})  and its mirror image, k = 2..k_max.
// From k_max >= 3 on, consecutive gaps share an endpoint, so the separation
// sum diverges and validate_geometry reports the set as invalid.
RealLineSet example2(int j_lo = 0, int j_hi = 0, int k_max = 2);

}  // namespace combline
