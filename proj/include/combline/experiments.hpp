#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "combline/bandlimited.hpp"
#include "combline/levinmap.hpp"
#include "combline/realset.hpp"
#include "combline/taumetric.hpp"

namespace combline {

struct ExperimentConfig {
  std::string set_source = "fixture:single-gap";
  double c_tilde = 0.0;  // 0 -> default rule
  int quad_order = 32;
  int n_pairs = 1000;
  int th3_pairs = 500;
  int bulk_points = 300;
  int geo_levels = 20;
  std::vector<double> sigmas = {4.0, 8.0, 16.0, 32.0, 64.0};
  std::string fn_spec = "abs-pow:x0=0,alpha=0.5";
  std::vector<double> deltas;  // empty -> geometric from 1e-3 to 1e-1, 13 pts
  std::string dist = "rho";    // "rho" or "tau"
  std::string out_dir = ".";
  std::uint64_t seed = 20260822;
  int minimax_pts = 40;  // grid points per pi/sigma
};

// key=value lines; '#' comments.  Unknown keys are rejected.
ExperimentConfig load_config(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

// Set source: a file path, "gen:example1:l_lo=..,l_hi=..,island=..,gap=..",
// "gen:example2:j_lo=..,j_hi=..,k_max=..", or one of the named fixtures
// below as "fixture:<name>".
RealLineSet resolve_set(const ExperimentConfig& cfg);

RealLineSet fixture_single_gap();    // gap (-1,1)
RealLineSet fixture_two_gap();       // gaps (-3,-1) and (1,3)
RealLineSet fixture_four_gap();      // four 0.5-long gaps, window [-8.25, 8.25]
RealLineSet fixture_example1_six();  // example1(-3, 3): six unit gaps
RealLineSet fixture_gap_free(double half_width = 6.0);

// Stratified pair sampling: 40% bulk uniform, 40% same-side geometric near a
// gap endpoint, 20% straddling a gap.  Gap-free sets fall back to bulk.
struct PairPlan {
  int n_pairs = 1000;
  double bulk_frac = 0.4;
  double endpoint_frac = 0.4;
  int geo_levels = 20;
};
std::vector<std::pair<double, double>> sample_pairs(const RealLineSet& E,
                                                    const PairPlan& plan,
                                                    std::mt19937_64& rng);

struct PairRow {
  double x1, x2, tau, rho, ratio;
};

struct EquivalenceReport {
  std::vector<PairRow> rows;  // sorted by (x1, x2)
  double ratio_min = 0.0, ratio_max = 0.0;
  std::uint64_t seed = 0;
  GeometryReport geometry;
  std::vector<double> residuals;
};
EquivalenceReport run_theorem1(const ExperimentConfig& cfg);
void write_equivalence_csv(const EquivalenceReport& rep, const std::string& path);

struct RegimeFit {
  std::string regime;     // "i", "ii", "iii"
  double x = 0.0;         // probe point
  double d_over_len = 0;  // d(x, J) / |J| (regime i)
  RateReport report;      // (delta, displacement) with log-log fit
  double level = 0.0;     // mean displacement/delta (regime i)
};

struct Lemma36Report {
  int gap = -1;  // probed gap index; -1 for gap-free sets
  std::vector<RegimeFit> fits;
  std::vector<std::string> notices;
  GeometryReport geometry;
  std::vector<double> residuals;
};
Lemma36Report run_lemma36(const ExperimentConfig& cfg);
void write_lemma36_csv(const Lemma36Report& rep, const std::string& path);

struct RatesReport {
  ExperimentConfig cfg;
  GeometryReport geometry;
  std::vector<double> residuals;

  std::vector<std::pair<double, double>> omega_points;  // (delta, omega*)
  RateFit omega_fit;
  bool omega_fitted = false;

  RateReport minimax;  // (sigma, grid sup error), type_factor 1
  RateReport kernel;   // (sigma, grid sup error), type_factor 100
  bool minimax_fitted = false;
  bool kernel_fitted = false;

  bool slopes_checked = false;
  double slope_gap = 0.0;  // |omega slope - |minimax slope||

  std::vector<std::array<double, 3>> th2_rows;  // sigma, kernel err, ||f||/σ + ω*(1/σ)
  double th2_min = 0.0, th2_max = 0.0;          // bracket of err / bound ratios

  double th3_A = 0.0, th3_alpha = 0.0;
  double th3_ratio_max = 0.0;
  int th3_pairs = 0;

  std::vector<std::string> notices;
};
// Measures ω*(δ) and A_σ for the configured function, fits both power laws,
// and asserts the exponents agree within 0.15 (throws check_failure when they
// do not).  Also evaluates the direct-bound and Ω-bound ratio series.
RatesReport run_rates(const ExperimentConfig& cfg);
void write_rates_outputs(const RatesReport& rep, const std::string& out_dir);

std::string format_value(double v);  // fixed "%.12g" used by every writer

}  // namespace combline
