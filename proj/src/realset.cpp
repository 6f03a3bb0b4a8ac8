#include "combline/realset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "combline/errors.hpp"

namespace combline {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance between two disjoint gaps as intervals; 0 when they touch.
double gap_distance(const Interval& a, const Interval& b) {
  if (a.hi <= b.lo) return b.lo - a.hi;
  if (b.hi <= a.lo) return a.lo - b.hi;
  return 0.0;
}

double separation_sum(const std::vector<Interval>& gaps, int j) {
  double sum = 0.0;
  for (int k = 0; k < static_cast<int>(gaps.size()); ++k) {
    if (k == j) continue;
    const double d = gap_distance(gaps[k], gaps[j]);
    if (d == 0.0) return kInf;
    const double q = gaps[k].length() / d;
    sum += q * q;
  }
  return sum;
}

double worst_separation(const std::vector<Interval>& gaps) {
  double c2 = 0.0;
  for (int j = 0; j < static_cast<int>(gaps.size()); ++j)
    c2 = std::max(c2, separation_sum(gaps, j));
  return c2;
}

}  // namespace

RealLineSet::RealLineSet(std::vector<Interval> gaps, Interval window, double c_tilde)
    : gaps_(std::move(gaps)), window_(window) {
  if (!(window_.lo < window_.hi))
    throw structural_error("window must have positive length");
  for (std::size_t j = 0; j < gaps_.size(); ++j) {
    const Interval& g = gaps_[j];
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !(g.lo < g.hi))
      throw structural_error("gap " + std::to_string(j) + " is not a proper interval");
    if (!(window_.lo < g.lo) || !(g.hi < window_.hi))
      throw structural_error("gap " + std::to_string(j) + " is not strictly inside the window");
    if (j > 0 && !(gaps_[j - 1].hi <= g.lo))
      throw structural_error("gaps must be ascending and disjoint");
  }

  const double c2 = worst_separation(gaps_);
  const double c5 = c2 > 0.0 ? 1.0 / std::sqrt(c2) : kInf;
  const double cap = std::min(1.0, 0.5 * c5);
  if (c_tilde <= 0.0) {
    c_tilde_ = 0.4 * cap;  // 0 exactly when some gaps touch
  } else {
    if (!(c_tilde < cap))
      throw structural_error("c_tilde must be below min(1, c5/2) = " + std::to_string(cap));
    c_tilde_ = c_tilde;
  }
}

std::vector<Interval> RealLineSet::islands() const {
  std::vector<Interval> out;
  double lo = window_.lo;
  for (const Interval& g : gaps_) {
    out.push_back({lo, g.lo});
    lo = g.hi;
  }
  out.push_back({lo, window_.hi});
  return out;
}

bool RealLineSet::contains(double x, double tol) const {
  if (x < window_.lo - tol || x > window_.hi + tol) return false;
  return !gap_index(x).has_value();
}

std::optional<int> RealLineSet::gap_index(double x) const {
  auto it = std::upper_bound(gaps_.begin(), gaps_.end(), x,
                             [](double v, const Interval& g) { return v < g.lo; });
  if (it == gaps_.begin()) return std::nullopt;
  --it;
  if (x > it->lo && x < it->hi) return static_cast<int>(it - gaps_.begin());
  return std::nullopt;
}

Interval RealLineSet::tilde_gap(int j) const {
  if (j < 0 || j >= gap_count()) throw structural_error("gap index out of range");
  if (c_tilde_ <= 0.0)
    throw structural_error("set admits no inflation constant (touching gaps)");
  const Interval& g = gaps_[j];
  const double pad = 0.5 * c_tilde_ * g.length();
  return {g.lo - pad, g.hi + pad};
}

std::optional<int> RealLineSet::tilde_index(double x) const {
  for (int j = 0; j < gap_count(); ++j) {
    const Interval t = tilde_gap(j);
    if (x > t.lo && x < t.hi) return j;
  }
  return std::nullopt;
}

void RealLineSet::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw structural_error("cannot open " + path + " for writing");
  char buf[128];
  std::snprintf(buf, sizeof buf, "window %.17g %.17g\n", window_.lo, window_.hi);
  out << buf;
  for (const Interval& g : gaps_) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", g.lo, g.hi);
    out << buf;
  }
  if (!out) throw structural_error("failed writing " + path);
}

RealLineSet RealLineSet::load(const std::string& path, double c_tilde) {
  std::ifstream in(path);
  if (!in) throw structural_error("cannot open set file " + path);
  std::string line;
  bool have_window = false;
  Interval window;
  std::vector<Interval> gaps;
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
      continue;
    }
    Interval g;
    try {
      g.lo = std::stod(first);
    } catch (const std::exception&) {
      throw structural_error(path + ":" + std::to_string(lineno) + ": expected a number");
    }
    if (!(ss >> g.hi))
      throw structural_error(path + ":" + std::to_string(lineno) + ": gap line needs two numbers");
    gaps.push_back(g);
  }
  if (!have_window) throw structural_error(path + ": missing window line");
  std::sort(gaps.begin(), gaps.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return RealLineSet(std::move(gaps), window, c_tilde);
}

GeometryReport validate_geometry(const RealLineSet& set, double threshold_c1,
                                 double threshold_c2) {
  GeometryReport rep;
  rep.threshold_c1 = threshold_c1;
  rep.threshold_c2 = threshold_c2;
  for (const Interval& g : set.gaps()) rep.c1 = std::max(rep.c1, g.length());
  rep.c2 = worst_separation(set.gaps());
  rep.c5 = rep.c2 > 0.0 ? 1.0 / std::sqrt(rep.c2) : kInf;

  rep.tilde_disjoint = set.c_tilde() > 0.0;
  if (rep.tilde_disjoint) {
    for (int j = 0; j + 1 < set.gap_count(); ++j)
      if (!(set.tilde_gap(j).hi < set.tilde_gap(j + 1).lo)) rep.tilde_disjoint = false;
  }
  rep.valid = rep.c1 <= threshold_c1 && rep.c2 <= threshold_c2 && rep.tilde_disjoint;
  return rep;
}

RealLineSet example1(int l_lo, int l_hi, double island, double gap) {
  if (l_hi <= l_lo) throw structural_error("example1 needs l_hi > l_lo");
  if (!(island > 0.0) || !(gap > 0.0))
    throw structural_error("example1 lengths must be positive");
  const double p = island + gap;
  std::vector<Interval> gaps;
  for (int l = l_lo; l < l_hi; ++l)
    gaps.push_back({l * p + island, (l + 1) * p});
  const double margin = 10.0 * gap;
  Interval window{l_lo * p - margin, l_hi * p + island + margin};
  return RealLineSet(std::move(gaps), window);
}

RealLineSet example2(int j_lo, int j_hi, int k_max) {
  if (j_hi < j_lo) throw structural_error("example2 needs j_hi >= j_lo");
  if (k_max < 2) throw structural_error("example2 needs k_max >= 2");
  std::vector<Interval> gaps;
  double longest = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double c = 2.0 * j;
    for (int k = 2; k <= k_max; ++k) {
      const double outer = std::ldexp(1.0, -k);           // 2^{-k}
      const double inner = outer * (1.0 - 1.0 / k);
      gaps.push_back({c + inner, c + outer});
      gaps.push_back({c - outer, c - inner});
      longest = std::max(longest, outer - inner);
    }
  }
  std::sort(gaps.begin(), gaps.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  const double margin = 10.0 * longest;
  Interval window{gaps.front().lo - margin, gaps.back().hi + margin};
  return RealLineSet(std::move(gaps), window);
}

}  // namespace combline
