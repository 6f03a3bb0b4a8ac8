#include "combline/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "combline/errors.hpp"

namespace combline {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::map<std::string, std::string> parse_kv_list(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw structural_error("expected key=value, got '" + item + "'");
    out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return out;
}

double kv_get(const std::map<std::string, std::string>& kv,
              const std::string& key, double fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : std::stod(it->second);
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g;
  g.reserve(n);
  for (int i = 0; i < n; ++i)
    g.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return g;
}

}  // namespace

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "set")
    cfg.set_source = value;
  else if (key == "c_tilde")
    cfg.c_tilde = std::stod(value);
  else if (key == "quad_order")
    cfg.quad_order = std::stoi(value);
  else if (key == "pairs")
    cfg.n_pairs = std::stoi(value);
  else if (key == "th3_pairs")
    cfg.th3_pairs = std::stoi(value);
  else if (key == "bulk_points")
    cfg.bulk_points = std::stoi(value);
  else if (key == "geo_levels")
    cfg.geo_levels = std::stoi(value);
  else if (key == "sigmas")
    cfg.sigmas = parse_double_list(value);
  else if (key == "fn")
    cfg.fn_spec = value;
  else if (key == "deltas")
    cfg.deltas = parse_double_list(value);
  else if (key == "dist")
    cfg.dist = value;
  else if (key == "out")
    cfg.out_dir = value;
  else if (key == "seed")
    cfg.seed = std::stoull(value);
  else if (key == "minimax_pts")
    cfg.minimax_pts = std::stoi(value);
  else
    throw structural_error("unknown config key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw structural_error("cannot open config file " + path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw structural_error("config line without '=': " + line);
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RealLineSet fixture_single_gap() {
  return RealLineSet({{-1.0, 1.0}}, {-21.0, 21.0});
}

RealLineSet fixture_two_gap() {
  return RealLineSet({{-3.0, -1.0}, {1.0, 3.0}}, {-23.0, 23.0});
}

RealLineSet fixture_four_gap() {
  return RealLineSet(
      {{-3.25, -2.75}, {-1.25, -0.75}, {0.75, 1.25}, {2.75, 3.25}},
      {-8.25, 8.25});
}

RealLineSet fixture_example1_six() { return example1(-3, 3, 2.0, 1.0); }

RealLineSet fixture_gap_free(double half_width) {
  return RealLineSet({}, {-half_width, half_width});
}

RealLineSet resolve_set(const ExperimentConfig& cfg) {
  const std::string& src = cfg.set_source;
  if (src.rfind("fixture:", 0) == 0) {
    std::string name = src.substr(8);
    if (name == "single-gap") return fixture_single_gap();
    if (name == "two-gap") return fixture_two_gap();
    if (name == "four-gap") return fixture_four_gap();
    if (name == "example1-six") return fixture_example1_six();
    if (name == "gap-free") return fixture_gap_free();
    throw structural_error("unknown fixture '" + name + "'");
  }
  if (src.rfind("gen:", 0) == 0) {
    std::string rest = src.substr(4);
    auto colon = rest.find(':');
    std::string which = colon == std::string::npos ? rest : rest.substr(0, colon);
    auto kv = colon == std::string::npos
                  ? std::map<std::string, std::string>{}
                  : parse_kv_list(rest.substr(colon + 1));
    std::optional<RealLineSet> base;
    if (which == "example1") {
      base = example1(int(kv_get(kv, "l_lo", -20)), int(kv_get(kv, "l_hi", 20)),
                      kv_get(kv, "island", 2.0), kv_get(kv, "gap", 1.0));
    } else if (which == "example2") {
      base = example2(int(kv_get(kv, "j_lo", 0)), int(kv_get(kv, "j_hi", 0)),
                      int(kv_get(kv, "k_max", 2)));
    } else {
      throw structural_error("unknown generator '" + which + "'");
    }
    if (cfg.c_tilde > 0.0)
      return RealLineSet(base->gaps(), base->window(), cfg.c_tilde);
    return *base;
  }
  return RealLineSet::load(src, cfg.c_tilde);
}

std::vector<std::pair<double, double>> sample_pairs(const RealLineSet& E,
                                                    const PairPlan& plan,
                                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto islands = E.islands();
  std::vector<double> cum{0.0};
  for (const auto& isl : islands) cum.push_back(cum.back() + isl.length());
  const double total = cum.back();

  auto bulk_point = [&]() {
    double u = unit(rng) * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    std::size_t idx = std::min<std::size_t>(it - cum.begin() - 1, islands.size() - 1);
    return islands[idx].lo + (u - cum[idx]);
  };

  const auto& gaps = E.gaps();
  double min_len = std::numeric_limits<double>::infinity();
  for (const auto& g : gaps) min_len = std::min(min_len, g.length());
  const double min_sep = gaps.empty() ? 1e-12 * total : 1e-9 * min_len;

  std::uniform_int_distribution<int> gap_pick(0, std::max<int>(1, int(gaps.size())) - 1);
  std::uniform_int_distribution<int> level_pick(0, plan.geo_levels);
  std::uniform_real_distribution<double> frac(0.5, 1.0);

  auto endpoint_offset = [&](const Interval& g) {
    return g.length() * std::ldexp(frac(rng), -level_pick(rng));
  };

  std::vector<std::pair<double, double>> out;
  out.reserve(plan.n_pairs);
  int nb = int(std::lround(plan.bulk_frac * plan.n_pairs));
  int ne = int(std::lround(plan.endpoint_frac * plan.n_pairs));
  if (gaps.empty()) {
    nb = plan.n_pairs;
    ne = 0;
  }
  int nc = plan.n_pairs - nb - ne;

  auto push_pair = [&](double a, double b) {
    if (!(std::abs(b - a) >= min_sep)) return false;
    if (!E.contains(a) || !E.contains(b)) return false;
    out.emplace_back(std::min(a, b), std::max(a, b));
    return true;
  };

  for (int i = 0; i < nb; ++i) {
    for (int tries = 0; tries < 200; ++tries)
      if (push_pair(bulk_point(), bulk_point())) break;
  }
  for (int i = 0; i < ne; ++i) {
    bool done = false;
    for (int tries = 0; tries < 200 && !done; ++tries) {
      const auto& g = gaps[gap_pick(rng)];
      bool left = unit(rng) < 0.5;
      double base = left ? g.lo : g.hi;
      double sgn = left ? -1.0 : 1.0;
      done = push_pair(base + sgn * endpoint_offset(g),
                       base + sgn * endpoint_offset(g));
    }
    if (!done) push_pair(bulk_point(), bulk_point());
  }
  for (int i = 0; i < nc; ++i) {
    bool done = false;
    for (int tries = 0; tries < 200 && !done; ++tries) {
      const auto& g = gaps[gap_pick(rng)];
      done = push_pair(g.lo - endpoint_offset(g), g.hi + endpoint_offset(g));
    }
    if (!done) push_pair(bulk_point(), bulk_point());
  }
  return out;
}

EquivalenceReport run_theorem1(const ExperimentConfig& cfg) {
  RealLineSet E = resolve_set(cfg);
  EquivalenceReport rep;
  rep.seed = cfg.seed;
  rep.geometry = validate_geometry(E);

  SolveOptions opt;
  opt.quad_order = cfg.quad_order;
  LevinMap map = solve_parameters(E, opt);
  rep.residuals = map.closure_residuals();

  PairPlan plan;
  plan.n_pairs = cfg.n_pairs;
  plan.geo_levels = cfg.geo_levels;
  std::mt19937_64 rng(cfg.seed);
  auto pairs = sample_pairs(E, plan, rng);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0.0;
  for (auto [x1, x2] : pairs) {
    PairRow row;
    row.x1 = x1;
    row.x2 = x2;
    row.tau = tau(E, x1, x2);
    row.rho = map.rho(x1, x2);
    row.ratio = row.rho / row.tau;
    rep.ratio_min = std::min(rep.ratio_min, row.ratio);
    rep.ratio_max = std::max(rep.ratio_max, row.ratio);
    rep.rows.push_back(row);
  }

  if (rep.rows.empty()) throw check_failure("no admissible pairs sampled");
  if (!(rep.ratio_min > 0.0) || !std::isfinite(rep.ratio_max))
    throw check_failure("rho/tau ratios are not bounded away from 0 and infinity");
  return rep;
}

void write_equivalence_csv(const EquivalenceReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw structural_error("cannot write " + path);
  out << "# format: equivalence v1\n";
  out << "x1,x2,tau,rho,ratio\n";
  for (const auto& r : rep.rows)
    out << format_value(r.x1) << ',' << format_value(r.x2) << ','
        << format_value(r.tau) << ',' << format_value(r.rho) << ','
        << format_value(r.ratio) << '\n';
}

Lemma36Report run_lemma36(const ExperimentConfig& cfg) {
  RealLineSet E = resolve_set(cfg);
  Lemma36Report rep;
  rep.geometry = validate_geometry(E);

  SolveOptions opt;
  opt.quad_order = cfg.quad_order;
  LevinMap map = solve_parameters(E, opt);
  rep.residuals = map.closure_residuals();

  auto sweep = [&](double x, const std::vector<double>& deltas) {
    RateReport rr;
    rr.method = "displacement";
    rr.type_factor = 1.0;
    for (double d : deltas)
      rr.points.emplace_back(d, map.vertical_displacement(x, d));
    rr.fit = rate_fit(rr.points);
    return rr;
  };

  if (E.gaps().empty()) {
    rep.gap = -1;
    double x = E.window().center();
    RegimeFit fit;
    fit.regime = "iii";
    fit.x = x;
    fit.report = sweep(x, geometric_grid(0.1, 10.0, 8));
    rep.fits.push_back(fit);
    rep.notices.push_back(
        "gap-free set: the map is affine and displacement growth is exactly "
        "linear in delta");
    return rep;
  }

  int widest = 0;
  for (std::size_t j = 1; j < E.gaps().size(); ++j)
    if (E.gaps()[j].length() > E.gaps()[widest].length()) widest = int(j);
  rep.gap = widest;
  const Interval g = E.gaps()[widest];
  const double len = g.length();

  // Regime i: x just outside the gap, delta well below d(x, J).
  for (double fr : {0.025, 0.05, 0.1}) {
    double d = fr * len;
    double x = g.hi + d;
    if (!E.contains(x, 1e-12)) {
      rep.notices.push_back("skipped regime-i probe at offset fraction " +
                            format_value(fr) + ": point not in the set");
      continue;
    }
    RegimeFit fit;
    fit.regime = "i";
    fit.x = x;
    fit.d_over_len = fr;
    fit.report = sweep(x, geometric_grid(d / 100.0, d / 4.0, 10));
    double lvl = 0.0;
    for (auto [dd, vv] : fit.report.points) lvl += vv / dd;
    fit.level = lvl / double(fit.report.points.size());
    rep.fits.push_back(fit);
  }

  // Regime ii: x at the gap endpoint, delta up to the gap scale.
  {
    RegimeFit fit;
    fit.regime = "ii";
    fit.x = g.hi;
    fit.report = sweep(g.hi, geometric_grid(1e-4 * len, 0.5 * len, 12));
    rep.fits.push_back(fit);
  }

  // Regime iii: delta far above the gap scale.
  {
    RegimeFit fit;
    fit.regime = "iii";
    fit.x = g.hi;
    fit.report = sweep(g.hi, geometric_grid(2.0 * len, 20.0 * len, 8));
    rep.fits.push_back(fit);
  }
  return rep;
}

void write_lemma36_csv(const Lemma36Report& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw structural_error("cannot write " + path);
  out << "# format: displacement v1\n";
  out << "regime,x,delta,displacement\n";
  for (const auto& fit : rep.fits)
    for (auto [d, v] : fit.report.points)
      out << fit.regime << ',' << format_value(fit.x) << ',' << format_value(d)
          << ',' << format_value(v) << '\n';
}

RatesReport run_rates(const ExperimentConfig& cfg) {
  RatesReport rep;
  rep.cfg = cfg;
  RealLineSet E = resolve_set(cfg);
  rep.geometry = validate_geometry(E);

  SolveOptions opt;
  opt.quad_order = cfg.quad_order;
  LevinMap map = solve_parameters(E, opt);
  rep.residuals = map.closure_residuals();

  SampledFunction f = make_sampled_function(cfg.fn_spec, E);

  DistanceFn rho_dist = [&map](double a, double b) { return map.rho(a, b); };
  DistanceFn tau_dist = [&E](double a, double b) { return tau(E, a, b); };
  if (cfg.dist != "rho" && cfg.dist != "tau")
    throw structural_error("dist must be 'rho' or 'tau'");
  const DistanceFn& dist = cfg.dist == "tau" ? tau_dist : rho_dist;

  PointPool pool = make_point_pool(E, cfg.bulk_points, cfg.geo_levels);
  OmegaStarCurve rho_curve(f.f, rho_dist, pool);
  std::optional<OmegaStarCurve> tau_curve;
  if (cfg.dist == "tau") tau_curve.emplace(f.f, tau_dist, pool);
  const OmegaStarCurve& curve = tau_curve ? *tau_curve : rho_curve;

  std::vector<double> deltas =
      cfg.deltas.empty() ? geometric_grid(1e-3, 1e-1, 13) : cfg.deltas;
  for (double d : deltas) rep.omega_points.emplace_back(d, curve(d));

  const double tiny = 1e-12 * (1.0 + f.sup_norm);
  {
    std::vector<std::pair<double, double>> pos;
    for (auto p : rep.omega_points)
      if (p.second > tiny) pos.push_back(p);
    if (pos.size() >= 4) {
      rep.omega_fit = rate_fit(pos);
      rep.omega_fitted = true;
    } else {
      rep.notices.push_back(
          "omega* is numerically zero on the delta grid; no power-law fit");
    }
  }

  rep.minimax.method = "minimax";
  rep.minimax.type_factor = 1.0;
  rep.kernel.method = "kernel";
  rep.kernel.type_factor = 100.0;
  for (double sigma : cfg.sigmas) {
    auto grid = make_error_grid(E, sigma, 0.2, cfg.minimax_pts, f.features);
    int half = minimax_half_width(E, sigma);
    auto [mm, mm_err] = minimax_approx(f, E, sigma, half, grid);
    rep.minimax.points.emplace_back(sigma, mm_err);

    auto ker = kernel_approximant(f, E, sigma);
    double kerr = 0.0;
    for (double x : grid) kerr = std::max(kerr, std::abs(f.f(x) - ker(x)));
    rep.kernel.points.emplace_back(sigma, kerr);
  }

  auto fit_positive = [&](RateReport& rr, bool& flag) {
    std::vector<std::pair<double, double>> pos;
    for (auto p : rr.points)
      if (p.second > tiny) pos.push_back(p);
    if (pos.size() >= 4) {
      rr.fit = rate_fit(pos);
      flag = true;
    }
  };
  fit_positive(rep.minimax, rep.minimax_fitted);
  fit_positive(rep.kernel, rep.kernel_fitted);
  if (!rep.minimax_fitted)
    rep.notices.push_back(
        "minimax errors are numerically zero; the target is reproduced "
        "exactly and no rate fit applies");

  if (rep.omega_fitted && rep.minimax_fitted) {
    rep.slope_gap = std::abs(rep.omega_fit.slope + rep.minimax.fit.slope);
    rep.slopes_checked = true;
    if (rep.slope_gap > 0.15)
      throw check_failure(
          "smoothness exponent " + format_value(rep.omega_fit.slope) +
          " and approximation-rate exponent " +
          format_value(-rep.minimax.fit.slope) + " differ by " +
          format_value(rep.slope_gap) + " (tolerance 0.15)");
  }

  // Direct bound: kernel error against ||f||/sigma + omega*(1/sigma).
  rep.th2_min = std::numeric_limits<double>::infinity();
  rep.th2_max = 0.0;
  for (std::size_t i = 0; i < cfg.sigmas.size(); ++i) {
    double sigma = cfg.sigmas[i];
    double base = f.sup_norm / sigma + rho_curve(1.0 / sigma);
    double ratio = rep.kernel.points[i].second / base;
    rep.th2_rows.push_back({sigma, rep.kernel.points[i].second, base});
    rep.th2_min = std::min(rep.th2_min, ratio);
    rep.th2_max = std::max(rep.th2_max, ratio);
  }

  // Majorant bound: |f(x1) - f(x2)| <= C * Omega(rho(x1, x2)) with the
  // modulus inferred from the measured minimax rates.
  if (rep.minimax_fitted) {
    double alpha = std::clamp(-rep.minimax.fit.slope, 0.05, 0.95);
    double A = 0.0;
    for (auto [s, e] : rep.minimax.points)
      A = std::max(A, e * std::pow(s, alpha));
    rep.th3_A = A;
    rep.th3_alpha = alpha;
    ModulusFunction omega = ModulusFunction::power(A, alpha);
    OmegaMajorant Omega(omega, f.sup_norm);

    PairPlan plan;
    plan.n_pairs = cfg.th3_pairs;
    plan.geo_levels = cfg.geo_levels;
    std::mt19937_64 rng(cfg.seed + 1);
    auto pairs = sample_pairs(E, plan, rng);
    rep.th3_pairs = int(pairs.size());
    for (auto [x1, x2] : pairs) {
      double r = map.rho(x1, x2);
      double om = Omega(r);
      if (om <= 0.0) continue;
      rep.th3_ratio_max =
          std::max(rep.th3_ratio_max, std::abs(f.f(x1) - f.f(x2)) / om);
    }
  } else {
    rep.notices.push_back("majorant ratio series skipped: no measured rate");
  }
  return rep;
}

void write_rates_outputs(const RatesReport& rep, const std::string& out_dir) {
  {
    std::ofstream out(out_dir + "/rates_omega.csv");
    if (!out) throw structural_error("cannot write rates_omega.csv in " + out_dir);
    out << "# format: omega v1\n";
    out << "delta,omega_star\n";
    for (auto [d, v] : rep.omega_points)
      out << format_value(d) << ',' << format_value(v) << '\n';
  }
  {
    std::ofstream out(out_dir + "/rates_approx.csv");
    if (!out) throw structural_error("cannot write rates_approx.csv in " + out_dir);
    out << "# format: approx v1\n";
    out << "sigma,error,method\n";
    for (auto [s, e] : rep.minimax.points)
      out << format_value(s) << ',' << format_value(e) << ",minimax\n";
    for (auto [s, e] : rep.kernel.points)
      out << format_value(s) << ',' << format_value(e) << ",kernel\n";
  }
  {
    std::ofstream out(out_dir + "/rates_summary.txt");
    if (!out) throw structural_error("cannot write rates_summary.txt in " + out_dir);
    out << "set=" << rep.cfg.set_source << '\n';
    out << "fn=" << rep.cfg.fn_spec << '\n';
    out << "dist=" << rep.cfg.dist << '\n';
    out << "seed=" << rep.cfg.seed << '\n';
    if (rep.omega_fitted)
      out << "omega_slope=" << format_value(rep.omega_fit.slope) << '\n';
    if (rep.minimax_fitted)
      out << "minimax_slope=" << format_value(rep.minimax.fit.slope) << '\n';
    if (rep.kernel_fitted)
      out << "kernel_slope=" << format_value(rep.kernel.fit.slope) << '\n';
    if (rep.slopes_checked)
      out << "slope_gap=" << format_value(rep.slope_gap) << '\n';
    out << "direct_ratio_min=" << format_value(rep.th2_min) << '\n';
    out << "direct_ratio_max=" << format_value(rep.th2_max) << '\n';
    if (rep.th3_pairs > 0) {
      out << "majorant_alpha=" << format_value(rep.th3_alpha) << '\n';
      out << "majorant_ratio_max=" << format_value(rep.th3_ratio_max) << '\n';
    }
    for (const auto& n : rep.notices) out << "notice=" << n << '\n';
  }
}

}  // namespace combline
