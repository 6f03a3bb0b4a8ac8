#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "combline/bandlimited.hpp"
#include "combline/errors.hpp"
#include "combline/experiments.hpp"
#include "combline/levinmap.hpp"
#include "combline/realset.hpp"
#include "combline/taumetric.hpp"

namespace {

using namespace combline;

void print_geometry(const GeometryReport& g) {
  std::cout << "c1=" << format_value(g.c1) << '\n'
            << "c2=" << format_value(g.c2) << '\n'
            << "c5=" << format_value(g.c5) << '\n'
            << "tilde_disjoint=" << (g.tilde_disjoint ? "true" : "false") << '\n'
            << "threshold_c1=" << format_value(g.threshold_c1) << '\n'
            << "threshold_c2=" << format_value(g.threshold_c2) << '\n'
            << "valid=" << (g.valid ? "true" : "false") << '\n';
}

void print_residuals(const std::vector<double>& r) {
  std::cout << "residuals=";
  for (std::size_t i = 0; i < r.size(); ++i)
    std::cout << (i ? " " : "") << format_value(r[i]);
  std::cout << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Geometric distances and bandlimited approximation on closed "
               "subsets of the real line"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "key=value config file");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");

  // Shared per-subcommand inputs; presence decides whether they override the
  // config file.
  struct {
    std::string set, fn, dist, method, map_file, map_out;
    std::vector<double> sigmas, deltas;
    double c_tilde = 0, x1 = 0, x2 = 0;
    int pairs = 0, quad_order = 0;
  } v;

  auto add_set = [&](CLI::App* cmd, bool required) {
    auto* o = cmd->add_option("--set", v.set,
                              "set file, gen:<name>:<params>, or fixture:<name>");
    if (required) o->required();
    return o;
  };

  auto* c_validate = app.add_subcommand("validate", "check gap-geometry conditions");
  add_set(c_validate, true);
  auto* validate_ct = c_validate->add_option("--c-tilde", v.c_tilde, "inflation constant");

  auto* c_solve = app.add_subcommand("solve-map", "solve the slit-map parameters");
  add_set(c_solve, true);
  c_solve->add_option("--out", v.map_out, "map file to write")->required();
  auto* solve_order = c_solve->add_option("--quad-order", v.quad_order, "quadrature order");

  auto* c_tau = app.add_subcommand("tau", "explicit geometric distance");
  add_set(c_tau, true);
  c_tau->add_option("--x1", v.x1)->required();
  c_tau->add_option("--x2", v.x2)->required();
  auto* tau_c = c_tau->add_option("--c", v.c_tilde, "inflation constant");

  auto* c_rho = app.add_subcommand("rho", "conformal distance from a solved map");
  c_rho->add_option("--map", v.map_file, "map file from solve-map")->required();
  c_rho->add_option("--x1", v.x1)->required();
  c_rho->add_option("--x2", v.x2)->required();

  auto* c_omega = app.add_subcommand("omega-star", "measured modulus of continuity");
  auto* omega_set = add_set(c_omega, false);
  auto* omega_fn = c_omega->add_option("--fn", v.fn, "function spec");
  auto* omega_dist = c_omega->add_option("--dist", v.dist)
                         ->check(CLI::IsMember({"tau", "rho"}));
  auto* omega_deltas = c_omega->add_option("--deltas", v.deltas)->delimiter(',');

  auto* c_approx = app.add_subcommand("approx", "bandlimited approximation errors");
  auto* approx_set = add_set(c_approx, false);
  auto* approx_fn = c_approx->add_option("--fn", v.fn, "function spec");
  c_approx->add_option("--method", v.method)
      ->check(CLI::IsMember({"kernel", "minimax"}))
      ->required();
  auto* approx_sigmas = c_approx->add_option("--sigmas", v.sigmas)->delimiter(',');

  auto* c_th1 = app.add_subcommand("theorem1", "distance-equivalence suite");
  auto* th1_set = add_set(c_th1, false);
  auto* th1_pairs = c_th1->add_option("--pairs", v.pairs, "sample pair count");

  auto* c_lem = app.add_subcommand("lemma36", "boundary displacement growth suite");
  auto* lem_set = add_set(c_lem, false);

  auto* c_rates = app.add_subcommand("rates", "smoothness vs approximation rates suite");
  auto* rates_set = add_set(c_rates, false);
  auto* rates_fn = c_rates->add_option("--fn", v.fn, "function spec");
  auto* rates_dist = c_rates->add_option("--dist", v.dist)
                         ->check(CLI::IsMember({"tau", "rho"}));
  auto* rates_sigmas = c_rates->add_option("--sigmas", v.sigmas)->delimiter(',');

  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  if (*seed_opt) cfg.seed = seed;
  if (*out_opt) cfg.out_dir = out_dir;

  if (*c_validate) {
    cfg.set_source = v.set;
    if (*validate_ct) cfg.c_tilde = v.c_tilde;
    RealLineSet E = resolve_set(cfg);
    GeometryReport g = validate_geometry(E);
    std::cout << "gaps=" << E.gaps().size() << '\n';
    std::cout << "c_tilde=" << format_value(E.c_tilde()) << '\n';
    print_geometry(g);
    return 0;
  }
  if (*c_solve) {
    cfg.set_source = v.set;
    if (*solve_order) cfg.quad_order = v.quad_order;
    RealLineSet E = resolve_set(cfg);
    SolveOptions opt;
    opt.quad_order = cfg.quad_order;
    LevinMap map = solve_parameters(E, opt);
    map.save(v.map_out);
    std::cout << "map=" << v.map_out << '\n';
    std::cout << "scale=" << format_value(map.scale()) << '\n';
    print_residuals(map.closure_residuals());
    return 0;
  }
  if (*c_tau) {
    cfg.set_source = v.set;
    if (*tau_c) cfg.c_tilde = v.c_tilde;
    RealLineSet E = resolve_set(cfg);
    // evaluate before streaming so a domain error cannot leave a half line
    const double t = tau(E, v.x1, v.x2);
    std::cout << "tau=" << format_value(t) << '\n';
    return 0;
  }
  if (*c_rho) {
    LevinMap map = LevinMap::load(v.map_file);
    const double r = map.rho(v.x1, v.x2);
    std::cout << "rho=" << format_value(r) << '\n';
    return 0;
  }
  if (*c_omega) {
    if (*omega_set) cfg.set_source = v.set;
    if (*omega_fn) cfg.fn_spec = v.fn;
    if (*omega_dist) cfg.dist = v.dist;
    if (*omega_deltas) cfg.deltas = v.deltas;
    RealLineSet E = resolve_set(cfg);
    SampledFunction f = make_sampled_function(cfg.fn_spec, E);
    DistanceFn dist;
    std::optional<LevinMap> map;
    if (cfg.dist == "tau") {
      dist = [&E](double a, double b) { return tau(E, a, b); };
    } else {
      map.emplace(solve_parameters(E));
      dist = [&m = *map](double a, double b) { return m.rho(a, b); };
    }
    PointPool pool = make_point_pool(E, cfg.bulk_points, cfg.geo_levels);
    OmegaStarCurve curve(f.f, dist, pool);
    std::vector<double> deltas = cfg.deltas;
    if (deltas.empty())
      for (int i = 0; i < 13; ++i)
        deltas.push_back(1e-3 * std::pow(100.0, i / 12.0));
    std::cout << "delta,omega_star\n";
    for (double d : deltas)
      std::cout << format_value(d) << ',' << format_value(curve(d)) << '\n';
    return 0;
  }
  if (*c_approx) {
    if (*approx_set) cfg.set_source = v.set;
    if (*approx_fn) cfg.fn_spec = v.fn;
    if (*approx_sigmas) cfg.sigmas = v.sigmas;
    RealLineSet E = resolve_set(cfg);
    SampledFunction f = make_sampled_function(cfg.fn_spec, E);
    std::cout << "sigma,error,method\n";
    for (double sigma : cfg.sigmas) {
      auto grid = make_error_grid(E, sigma, 0.2, cfg.minimax_pts, f.features);
      double err = 0.0;
      if (v.method == "minimax") {
        auto [g, sup] =
            minimax_approx(f, E, sigma, minimax_half_width(E, sigma), grid);
        err = sup;
      } else {
        auto g = kernel_approximant(f, E, sigma);
        for (double x : grid) err = std::max(err, std::abs(f(x) - g(x)));
      }
      std::cout << format_value(sigma) << ',' << format_value(err) << ','
                << v.method << '\n';
    }
    return 0;
  }
  if (*c_th1) {
    if (*th1_set) cfg.set_source = v.set;
    if (*th1_pairs) cfg.n_pairs = v.pairs;
    EquivalenceReport rep = run_theorem1(cfg);
    write_equivalence_csv(rep, cfg.out_dir + "/theorem1_pairs.csv");
    std::cout << "pairs=" << rep.rows.size() << '\n';
    std::cout << "ratio_min=" << format_value(rep.ratio_min) << '\n';
    std::cout << "ratio_max=" << format_value(rep.ratio_max) << '\n';
    print_residuals(rep.residuals);
    return 0;
  }
  if (*c_lem) {
    if (*lem_set) cfg.set_source = v.set;
    Lemma36Report rep = run_lemma36(cfg);
    write_lemma36_csv(rep, cfg.out_dir + "/lemma36_displacement.csv");
    std::cout << "gap=" << rep.gap << '\n';
    for (const auto& fit : rep.fits) {
      std::cout << "regime_" << fit.regime << "_x=" << format_value(fit.x)
                << '\n';
      std::cout << "regime_" << fit.regime
                << "_slope=" << format_value(fit.report.fit.slope) << '\n';
      if (fit.regime == "i")
        std::cout << "regime_i_level=" << format_value(fit.level) << '\n';
    }
    for (const auto& n : rep.notices) std::cout << "notice=" << n << '\n';
    return 0;
  }
  if (*c_rates) {
    if (*rates_set) cfg.set_source = v.set;
    if (*rates_fn) cfg.fn_spec = v.fn;
    if (*rates_dist) cfg.dist = v.dist;
    if (*rates_sigmas) cfg.sigmas = v.sigmas;
    RatesReport rep = run_rates(cfg);
    write_rates_outputs(rep, cfg.out_dir);
    if (rep.omega_fitted)
      std::cout << "omega_slope=" << format_value(rep.omega_fit.slope) << '\n';
    if (rep.minimax_fitted)
      std::cout << "minimax_slope=" << format_value(rep.minimax.fit.slope)
                << '\n';
    if (rep.kernel_fitted)
      std::cout << "kernel_slope=" << format_value(rep.kernel.fit.slope) << '\n';
    if (rep.slopes_checked)
      std::cout << "slope_gap=" << format_value(rep.slope_gap) << '\n';
    std::cout << "direct_ratio_max=" << format_value(rep.th2_max) << '\n';
    if (rep.th3_pairs > 0)
      std::cout << "majorant_ratio_max=" << format_value(rep.th3_ratio_max)
                << '\n';
    for (const auto& n : rep.notices) std::cout << "notice=" << n << '\n';
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const combline::check_failure& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
