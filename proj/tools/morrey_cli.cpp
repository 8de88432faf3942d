// Command-line front end: every qualitative property of the discrete
// fractional Morrey problem as a subcommand writing plot-ready CSV/JSON.
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "morrey/config.hpp"
#include "morrey/io.hpp"
#include "morrey/operator.hpp"
#include "morrey/perron.hpp"
#include "morrey/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace morrey;

namespace {

int g_log_level = 1;  // 0 quiet, 1 info, 2 debug (MORREY_LOG)

void init_log_level() {
  const char* env = std::getenv("MORREY_LOG");
  if (!env) return;
  const std::string v = env;
  if (v == "quiet")
    g_log_level = 0;
  else if (v == "debug")
    g_log_level = 2;
  else
    g_log_level = 1;
}

void log_at(int level, const char* fmt, ...) {
  if (g_log_level < level) return;
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}
#define LOG_INFO(...) log_at(1, __VA_ARGS__)
#define LOG_DEBUG(...) log_at(2, __VA_ARGS__)

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed_val = 0;
  CLI::Option* seed_opt = nullptr;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonArgs& a) {
  sub->add_option("--config", a.config_path, "flat key=value config file");
  sub->add_option("--out", a.out_dir, "output directory (overrides output_dir)");
  a.seed_opt = sub->add_option("--seed", a.seed_val, "RNG seed (overrides rng_seed)");
  sub->add_option("overrides", a.overrides, "key=value config overrides");
}

RunConfig make_config(const CommonArgs& a) {
  std::optional<fs::path> file;
  if (!a.config_path.empty()) file = a.config_path;
  RunConfig cfg = load_config(file, a.overrides);
  if (a.seed_opt && a.seed_opt->count() > 0) cfg.rng_seed = a.seed_val;
  if (!a.out_dir.empty()) cfg.output_dir = a.out_dir;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.output_dir);
  return cfg;
}

void dump_json_file(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

GridFunction random_function(const Lattice& lat, SplitRng& rng, bool random_far_field) {
  GridFunction u;
  u.lattice = lat;
  u.values.resize(lat.node_count);
  for (double& v : u.values) v = rng.uniform(-1.0, 1.0);
  u.far_field = random_far_field ? rng.uniform(-1.0, 1.0) : 0.0;
  return u;
}

int cmd_extremal(const CommonArgs& a) {
  const RunConfig cfg = make_config(a);
  const Lattice lat = config_lattice(cfg);
  LOG_INFO("extremal: n=%d s=%g p=%g L=%g h=%g (%d nodes)", lat.params.n, lat.params.s,
           lat.params.p, lat.L, lat.h, lat.node_count);
  const KernelWeights kw = build_weights(lat);
  const PinSpec pins = config_pins(cfg, lat);
  const ExtremalResult res = solve_extremal(lat, kw, pins, config_solve_options(cfg));
  LOG_INFO("converged in %ld iterations (grad norm %g); c_star_hat = %.12g", res.iterations,
           res.final_grad_norm, res.c_star_hat);
  const fs::path out = cfg.output_dir;
  write_extremal_result(res, out / "extremal.csv", out / "extremal.json");
  const Residual r = euler_lagrange_residual(res, kw);
  write_residual(r, lat, out / "el_residual.csv", out / "el_residual.json");
  LOG_INFO("wrote %s", (out / "extremal.csv").string().c_str());
  return 0;
}

int cmd_sweep(const CommonArgs& a) {
  const RunConfig cfg = make_config(a);
  if (cfg.sweep_axis.empty()) throw ConfigError("sweep.axis is required (one of s, p, h, L)");
  if (cfg.sweep_values.empty()) throw ConfigError("sweep.values must be a non-empty list");
  const fs::path out = cfg.output_dir;
  std::ofstream csv(out / "sweep.csv", std::ios::binary);
  if (!csv) throw ConfigError("cannot open sweep.csv for writing");
  csv << "value,c_star_hat,gagliardo,holder,max_el_residual\n";

  bool any_failed = false;
  for (double value : cfg.sweep_values) {
    RunConfig run = cfg;
    if (cfg.sweep_axis == "s")
      run.s = value;
    else if (cfg.sweep_axis == "p")
      run.p = value;
    else if (cfg.sweep_axis == "h")
      run.h = value;
    else
      run.L = value;
    try {
      const Lattice lat = config_lattice(run);
      const KernelWeights kw = build_weights(lat);
      const ExtremalResult res =
          solve_extremal(lat, kw, config_pins(run, lat), config_solve_options(run));
      const Residual r = euler_lagrange_residual(res, kw);
      csv << format_double(value) << ',' << format_double(res.c_star_hat) << ','
          << format_double(res.gagliardo) << ',' << format_double(res.holder) << ','
          << format_double(r.max_abs) << '\n';
      LOG_INFO("sweep %s=%g: c_star_hat = %.12g", cfg.sweep_axis.c_str(), value,
               res.c_star_hat);
    } catch (const MorreyError& e) {
      any_failed = true;
      csv << format_double(value) << ",nan,nan,nan,nan\n";
      LOG_INFO("sweep %s=%g failed: %s", cfg.sweep_axis.c_str(), value, e.what());
    }
  }
  return any_failed ? 2 : 0;
}

int cmd_barrier(const CommonArgs& a) {
  const RunConfig cfg = make_config(a);
  const Lattice lat = config_lattice(cfg);
  const Point origin{0.0, 0.0};
  const std::vector<int> nodes = nodes_in_annulus(lat, origin, 1.0, 2.0);
  LOG_INFO("barrier: residual at %zu nodes with |x| in [1, 2]", nodes.size());
  const Residual r = verify_barrier_harmonicity(lat.params, lat, nodes);
  const fs::path out = cfg.output_dir;
  write_residual(r, lat, out / "barrier_residual.csv", out / "barrier_residual.json");
  LOG_INFO("max-abs residual %g", r.max_abs);
  return 0;
}

int cmd_perron(const CommonArgs& a) {
  const RunConfig cfg = make_config(a);
  if (cfg.n != 2) throw ConfigError("the perron experiment needs params.n=2");
  const FracParams params = make_frac_params(cfg.n, cfg.s, cfg.p);
  LOG_INFO("perron: slit problem at L=%g h=%g", cfg.L, cfg.h);
  const SlitReport rep =
      run_slit_experiment(params, cfg.L, cfg.h, cfg.tol, cfg.max_iter);
  const Lattice& lat = rep.u.lattice;
  const fs::path out = cfg.output_dir;
  const ComplementData data = make_slit_data(lat);
  write_complement_data(data, lat, out / "slit_data.csv", out / "slit_data.json");
  write_grid_function(rep.u, out / "slit_solution.csv", out / "slit_solution.json");
  write_radius_report(rep.radii, rep.ring_max, out / "slit_rings.json");

  const KernelWeights kw = build_weights(lat);
  const BarrierBoundReport bb =
      verify_barrier_bound(lat, kw, data, Point{0.0, 0.0}, cfg.barrier_r0, cfg.barrier_r1,
                           cfg.barrier_M, cfg.tol, cfg.max_iter, &rep.u);
  json summary{{"radial_violation", rep.radial_violation},
               {"negation_gap", rep.negation_gap},
               {"barrier_bound",
                {{"worst_ratio", bb.worst_ratio},
                 {"bound_constant", bb.bound_constant},
                 {"beta", bb.beta},
                 {"r0", cfg.barrier_r0},
                 {"r1", cfg.barrier_r1}}}};
  dump_json_file(summary, out / "slit_summary.json");
  LOG_INFO("ring-max at rho=%g: %g; barrier worst ratio %g", rep.radii.front(),
           rep.ring_max.front(), bb.worst_ratio);
  return 0;
}

int cmd_verify(const CommonArgs& a) {
  const RunConfig cfg = make_config(a);
  const fs::path out = cfg.output_dir;
  const Lattice lat = config_lattice(cfg);
  const KernelWeights kw = build_weights(lat);
  // The theorem suite runs on the canonical normalization regardless of any
  // pins.* overrides; those feed the extremal/sweep subcommands.
  const PinSpec pins = canonical_pins(lat);
  SolveOptions opt = config_solve_options(cfg);
  opt.free_far_field = false;
  SplitRng root(cfg.rng_seed);

  json report;
  bool all_pass = true;
  const auto record = [&](const char* name, bool pass, json detail) {
    detail["pass"] = pass;
    report[name] = std::move(detail);
    all_pass = all_pass && pass;
    LOG_INFO("  %-22s %s", name, pass ? "pass" : "FAIL");
  };

  LOG_INFO("verify: n=%d s=%g p=%g L=%g h=%g seed=%llu", lat.params.n, lat.params.s,
           lat.params.p, lat.L, lat.h, static_cast<unsigned long long>(cfg.rng_seed));
  const ExtremalResult res = solve_extremal(lat, kw, pins, opt);
  const double cstar = estimate_sharp_constant(res);
  LOG_DEBUG("canonical extremal: %ld iterations, c_star_hat = %.12g", res.iterations, cstar);

  {
    SplitRng rng = root.split(1);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const GridFunction v = random_function(lat, rng, false);
      const double gag = gagliardo_seminorm(v, kw);
      if (gag > 0.0) worst = std::max(worst, holder_seminorm(v).value / gag);
    }
    record("morrey_bound", worst <= cstar * 1.02,
           {{"worst_ratio", worst}, {"c_star_hat", cstar}});
  }

  {
    SplitRng rng = root.split(2);
    const double p = lat.params.p;
    double min_slack = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
      const GridFunction u = random_function(lat, rng, true);
      const GridFunction v = random_function(lat, rng, true);
      GridFunction mid = u, dif = u;
      for (int i = 0; i < lat.node_count; ++i) {
        mid.values[i] = 0.5 * (u.values[i] + v.values[i]);
        dif.values[i] = 0.5 * (u.values[i] - v.values[i]);
      }
      mid.far_field = 0.5 * (u.far_field + v.far_field);
      dif.far_field = 0.5 * (u.far_field - v.far_field);
      const double eu = gagliardo_energy(u, kw), ev = gagliardo_energy(v, kw);
      const double em = gagliardo_energy(mid, kw), ed = gagliardo_energy(dif, kw);
      double slack;
      if (p >= 2.0) {
        slack = 0.5 * eu + 0.5 * ev - (em + ed);
      } else {
        const double inv = 1.0 / (p - 1.0);
        slack = std::pow(0.5 * eu + 0.5 * ev, inv) - (std::pow(em, inv) + std::pow(ed, inv));
      }
      min_slack = std::min(min_slack, slack);
    }
    record("clarkson", min_slack >= -1e-10, {{"min_slack", min_slack}});
  }

  {
    SplitRng rng = root.split(3);
    std::vector<std::vector<double>> inits;
    inits.emplace_back(lat.node_count, (pins.a + pins.b) / 2.0);
    std::vector<double> noisy(lat.node_count);
    for (double& v : noisy) v = rng.uniform(-1.0, 1.0);
    inits.push_back(std::move(noisy));
    const UniquenessReport ur = verify_uniqueness(lat, kw, pins, inits, opt);
    record("uniqueness", ur.max_gap <= 10.0 * cfg.tol, {{"max_gap", ur.max_gap}});
  }

  const SymmetryReport sym = verify_symmetries(res);
  {
    double axis_defect;
    json detail;
    if (lat.params.n == 2) {
      axis_defect = sym.axis_defect;
      detail["lattice"] = "configured";
    } else {
      // The axis-fixing symmetry group is trivial in 1D; run the standard
      // two-dimensional companion problem instead.
      const FracParams p2 = cfg.s * cfg.p > 2.0 ? make_frac_params(2, cfg.s, cfg.p)
                                                : make_frac_params(2, 0.9, 4.0);
      const Lattice lat2 = build_lattice(p2, 2.0, 0.25);
      const KernelWeights kw2 = build_weights(lat2);
      const ExtremalResult res2 = solve_extremal(lat2, kw2, canonical_pins(lat2), opt);
      axis_defect = verify_symmetries(res2).axis_defect;
      detail["lattice"] = "2d companion";
    }
    detail["axis_defect"] = axis_defect;
    record("rotational_symmetry", axis_defect <= 10.0 * cfg.tol, detail);
  }
  record("anti_symmetry", sym.antisym_defect <= 10.0 * cfg.tol,
         {{"antisym_defect", sym.antisym_defect}});

  {
    const BoundsReport br = verify_pointwise_bounds(res);
    record("pointwise_bounds", br.within_bounds && br.strict_margin > 0.0,
           {{"within_bounds", br.within_bounds}, {"strict_margin", br.strict_margin}});
  }

  {
    SplitRng rng = root.split(4);
    double min_residual = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 20; ++k) {
      const GridFunction v = random_function(lat, rng, false);
      const StabilityReport sr = verify_stability(res, v, kw);
      min_residual = std::min(min_residual, sr.residual);
    }
    record("stability", min_residual >= -1e-8, {{"min_residual", min_residual}});
  }

  {
    ExtremalResult el = res;
    std::string source = "solver";
    bool compatible = true;
    if (fs::exists(out / "extremal.csv") && fs::exists(out / "extremal.json")) {
      source = "artifact";
      ExtremalResult file = read_extremal_result(out / "extremal.csv", out / "extremal.json");
      if (file.u.lattice == lat) {
        // Derived quantities are recomputed; only the values and pins are
        // trusted, so a tampered file cannot smuggle in a consistent story.
        file.gagliardo = gagliardo_seminorm(file.u, kw);
        file.holder = holder_seminorm(file.u).value;
        file.c_star_hat = file.gagliardo > 0.0 ? file.holder / file.gagliardo : 0.0;
        file.tol = cfg.tol;
        el = file;
      } else {
        compatible = false;
      }
    }
    if (!compatible) {
      record("euler_lagrange", false,
             {{"error", "extremal artifact is for a different lattice"}, {"source", source}});
    } else {
      const Residual r = euler_lagrange_residual(el, kw);
      const double m0 = (*r.pin_masses)[0], m1 = (*r.pin_masses)[1];
      const double mag = std::max(std::abs(m0), std::abs(m1));
      const bool ok = r.max_abs <= 10.0 * cfg.tol && m0 * m1 < 0.0 &&
                      std::abs(std::abs(m0) - std::abs(m1)) <= 1e-6 * mag;
      record("euler_lagrange", ok,
             {{"max_abs", r.max_abs},
              {"pin_masses", {m0, m1}},
              {"expected_pin_mass", r.expected_pin_mass},
              {"source", source}});
    }
  }

  {
    const Point origin{0.0, 0.0};
    const Residual coarse = verify_barrier_harmonicity(
        lat.params, lat, nodes_in_annulus(lat, origin, 1.0, 2.0));
    const Lattice fine_lat = build_lattice(lat.params, 2.0 * lat.L, lat.h / 2.0);
    const Residual fine = verify_barrier_harmonicity(
        lat.params, fine_lat, nodes_in_annulus(fine_lat, origin, 1.0, 2.0));
    record("barrier", fine.max_abs <= coarse.max_abs / 1.5,
           {{"coarse_max_abs", coarse.max_abs},
            {"fine_max_abs", fine.max_abs},
            {"factor", fine.max_abs > 0.0 ? coarse.max_abs / fine.max_abs : 0.0}});
  }

  {
    const FracParams p2 = cfg.n == 2 && cfg.s * cfg.p > 2.0
                              ? lat.params
                              : make_frac_params(2, 0.9, 4.0);
    const SlitReport sr = run_slit_experiment(p2, 1.0, 1.0 / 16.0, cfg.tol, cfg.max_iter);
    json rings = json::array();
    for (std::size_t i = 0; i < sr.radii.size(); ++i)
      rings.push_back({sr.radii[i], sr.ring_max[i]});
    const bool ok = sr.ring_max.front() < sr.ring_max.back() && sr.negation_gap <= 1e-14 &&
                    sr.radial_violation <= 2e-2;
    record("slit_decay", ok,
           {{"rings", rings},
            {"radial_violation", sr.radial_violation},
            {"negation_gap", sr.negation_gap}});
  }

  {
    // Sample radii: the dyadic box fractions when they clear the pin shell
    // |x| = 1 (regions containing a pin all tie at the pin deviation),
    // walking inward one node shell at a time when the box is too small for
    // three of them.
    std::vector<double> radii;
    for (double r : {lat.L / 4.0, lat.L / 2.0, lat.L})
      if (r > 1.0 + 0.75 * lat.h) radii.push_back(r);
    while (radii.size() < 3) {
      const double next = (radii.empty() ? lat.L : radii.front()) - lat.h;
      if (next <= 1.0 + 0.25 * lat.h) break;
      radii.insert(radii.begin(), next);
    }
    const DecayReport dr = run_decay_experiment(res, radii, kw);
    json devs = json::array();
    for (std::size_t i = 0; i < dr.radii.size(); ++i)
      devs.push_back({dr.radii[i], dr.max_dev[i]});
    bool strict = dr.max_dev.size() >= 2;
    for (std::size_t i = 1; i < dr.max_dev.size(); ++i)
      strict = strict && dr.max_dev[i - 1] > dr.max_dev[i];
    record("limit_at_infinity", strict && dr.far_field_balance <= 10.0 * cfg.tol,
           {{"deviations", devs}, {"far_field_balance", dr.far_field_balance}});
    record("half_space_sign", dr.sign_defect <= 10.0 * cfg.tol,
           {{"sign_defect", dr.sign_defect}});
  }

  dump_json_file(report, out / "verify_report.json");
  LOG_INFO("wrote %s (%s)", (out / "verify_report.json").string().c_str(),
           all_pass ? "all checks pass" : "FAILURES present");
  return all_pass ? 0 : 1;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const MorreyError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  init_log_level();
  CLI::App app{"discrete fractional Morrey extremals and nonlocal Dirichlet experiments"};
  app.require_subcommand(1);

  CommonArgs a_ex, a_ve, a_sw, a_pe, a_ba;
  add_common(app.add_subcommand("extremal", "solve the pinned energy minimizer"), a_ex);
  add_common(app.add_subcommand("verify", "run the full property suite"), a_ve);
  add_common(app.add_subcommand("sweep", "re-solve along one parameter axis"), a_sw);
  add_common(app.add_subcommand("perron", "slit-domain Dirichlet experiment"), a_pe);
  add_common(app.add_subcommand("barrier", "operator residual of the explicit barrier"), a_ba);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (app.got_subcommand("extremal")) return run_guarded([&] { return cmd_extremal(a_ex); });
  if (app.got_subcommand("verify")) return run_guarded([&] { return cmd_verify(a_ve); });
  if (app.got_subcommand("sweep")) return run_guarded([&] { return cmd_sweep(a_sw); });
  if (app.got_subcommand("perron")) return run_guarded([&] { return cmd_perron(a_pe); });
  if (app.got_subcommand("barrier")) return run_guarded([&] { return cmd_barrier(a_ba); });
  return 1;
}
