// Command-line front end: run, sweep, observe-check, assumptions-check.
//
// Exit codes: 0 success, 1 I/O or internal failure, 2 configuration or usage
// error, 3 blow-up, 4 fit or check failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nudgelab/config.hpp"
#include "nudgelab/errors.hpp"
#include "nudgelab/export.hpp"
#include "nudgelab/harness.hpp"
#include "nudgelab/models.hpp"
#include "nudgelab/nudging.hpp"
#include "nudgelab/observation.hpp"

namespace fs = std::filesystem;
using namespace nudgelab;

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, blow_up = 3, check_failed = 4 };

struct Manifest {
  std::optional<std::string> config_path;
  std::string output_dir = ".";
  std::vector<std::string> overrides;
  int parallelism = 1;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Manifest& m, bool writes_output) {
  cmd->add_option("--config", m.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  if (writes_output) cmd->add_option("--out", m.output_dir, "output directory (created if absent)");
  cmd->add_option("--set", m.overrides, "override a config value, key=value (repeatable)");
  cmd->add_option("--parallelism", m.parallelism, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", m.seed, "replaces init.seed");
}

RunConfig load(const Manifest& m) {
  std::optional<fs::path> path;
  if (m.config_path) path = *m.config_path;
  return load_run_config(path, m.overrides, m.seed);
}

fs::path prepare_output(const Manifest& m) {
  fs::path dir(m.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

ExportMeta meta_for(const RunConfig& cfg) { return {to_json(cfg), cfg.twin.u0_seed}; }

Json feasibility_json(double mu, double delta) {
  const MuInterval iv = feasible_mu_interval(delta);
  Json j;
  j["mu"] = mu;
  j["delta"] = delta;
  j["feasible"] = iv.contains(mu);
  j["interval_exists"] = iv.feasible;
  if (iv.feasible) {
    j["mu_lower"] = iv.lower;
    j["mu_upper"] = iv.upper;
  }
  return j;
}

int cmd_run(const Manifest& m) {
  const RunConfig cfg = load(m);
  const fs::path dir = prepare_output(m);
  const ExportMeta meta = meta_for(cfg);
  const TwinConfig& twin = cfg.twin;

  TwinResult res;
  try {
    res = run_twin_experiment(twin);
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.trajectory() << " trajectory became non-finite at t = "
              << format_double(e.time()) << "\n";
    return blow_up;
  }
  const TrajectoryRecord& rec = res.record;
  export_trajectory(rec, dir / "trajectory.csv", ExportFormat::csv);
  export_trajectory(rec, dir / "trajectory.json", ExportFormat::json, meta);

  Json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["kind"] = "summary";
  summary["code_version"] = code_version();
  summary["seed"] = meta.seed;
  summary["config"] = meta.config;
  summary["stability_limit"] = std::isfinite(res.stability_limit)
                                   ? Json(res.stability_limit)
                                   : Json(twin.scheme.t_end);
  summary["feasibility"] = feasibility_json(twin.mu, twin.delta);
  Json finals = Json::object();
  for (const auto& n : rec.norms) {
    const double e = rec.err.at(n).back();
    const double r0 = rec.ref.at(n).front();
    finals[n] = {{"error", e}, {"relative_error", r0 > 0 ? Json(e / r0) : Json(nullptr)}};
  }
  summary["final"] = finals;

  int code = ok;
  const double t_burn = cfg.fit.burn_for(twin.scheme.t_end);
  try {
    const DecayFit fit = fit_decay_rate(rec, cfg.fit.norm, t_burn, cfg.fit.floor, cfg.fit.relative);
    summary["fit"] = {{"norm", cfg.fit.norm},     {"rate", fit.rate},
                      {"intercept", fit.intercept}, {"r2", fit.r_squared},
                      {"t_begin", fit.t_begin},   {"t_end", fit.t_end},
                      {"points", fit.points},     {"floor", fit.floor},
                      {"relative", cfg.fit.relative}};
    std::printf("rate %s  r2 %s  window [%s, %s]  points %d\n", format_double(fit.rate).c_str(),
                format_double(fit.r_squared).c_str(), format_double(fit.t_begin).c_str(),
                format_double(fit.t_end).c_str(), fit.points);
  } catch (const FitError& e) {
    summary["fit"] = nullptr;
    summary["fit_error"] = e.what();
    std::cerr << "fit failed: " << e.what() << "\n";
    code = check_failed;
  }
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  std::printf("wrote %s\n", dir.string().c_str());
  return code;
}

int cmd_sweep(const Manifest& m) {
  const RunConfig cfg = load(m);
  const fs::path dir = prepare_output(m);
  const SweepTable table = sweep(cfg.twin, cfg.sweep_mu, cfg.sweep_delta, cfg.fit, m.parallelism);
  const ExportMeta meta = meta_for(cfg);
  export_sweep(table, dir / "sweep.csv", ExportFormat::csv);
  export_sweep(table, dir / "sweep.json", ExportFormat::json, meta);
  std::printf("%12s %12s %14s %10s %9s %7s\n", "delta", "mu", "rate", "r2", "feasible", "blewup");
  for (const SweepRow& r : table.rows) {
    std::printf("%12s %12s %14s %10s %9s %7s%s%s\n", format_double(r.delta).c_str(),
                format_double(r.mu).c_str(), format_double(r.rate).c_str(),
                format_double(r.r2).c_str(), r.feasible ? "yes" : "no", r.blewup ? "yes" : "no",
                r.error.empty() ? "" : "  ", r.error.c_str());
  }
  return ok;
}

int cmd_observe_check(const Manifest& m) {
  const RunConfig cfg = load(m);
  const ObserveCheckConfig& oc = cfg.observe;
  const GridPtr grid = Grid::make(oc.dim, oc.n, Boundary::periodic);
  Json report = Json::array();
  bool pass = true;
  std::printf("%-15s %8s %6s %10s %10s %10s  %s\n", "observer", "slope", "tol", "min_field",
              "max_field", "constant", "verdict");
  for (ObserverKind kind : {ObserverKind::low_pass, ObserverKind::volume_average}) {
    RandomFieldRecipe recipe;
    recipe.max_mode = oc.max_mode;
    recipe.decay = kind == ObserverKind::low_pass ? threshold_decay(oc.dim) : smooth_decay(oc.dim);
    const ScalingStudy s = interp_scaling_study(kind, grid, oc.deltas, oc.samples, oc.seed, recipe);
    const double tol = kind == ObserverKind::low_pass ? oc.tol_low_pass : oc.tol_volume_average;
    const bool good = std::abs(s.slope - 1.0) <= tol;
    pass = pass && good;
    std::printf("%-15s %8.4f %6.3f %10.4f %10.4f %10.4f  %s\n", std::string(to_string(kind)).c_str(),
                s.slope, tol, s.min_field_slope, s.max_field_slope, s.constant,
                good ? "pass" : "FAIL");
    report.push_back({{"observer", to_string(kind)},
                      {"decay", recipe.decay},
                      {"deltas", s.deltas},
                      {"rms_errors", s.rms_errors},
                      {"slope", s.slope},
                      {"tolerance", tol},
                      {"min_field_slope", s.min_field_slope},
                      {"max_field_slope", s.max_field_slope},
                      {"constant", s.constant},
                      {"pass", good}});
  }
  if (m.output_dir != ".") {
    const fs::path dir = prepare_output(m);
    Json doc = {{"schema_version", kSchemaVersion}, {"kind", "observe_check"},
                {"code_version", code_version()},   {"seed", oc.seed},
                {"config", to_json(cfg)},           {"studies", report}};
    write_text(dir / "observe_check.json", doc.dump(2) + "\n");
  }
  return pass ? ok : check_failed;
}

struct ProbeStats {
  double max = 0.0;
  double mean = 0.0;
};

ProbeStats probe_lipschitz(const Model& model, std::uint64_t seed, int pairs) {
  std::mt19937_64 rng(seed);
  ProbeStats st;
  for (int i = 0; i < pairs; ++i) {
    ModelState a;
    ModelState b;
    for (int c = 0; c < model.components(); ++c) {
      a.components.push_back(random_smooth_field(model.grid_ptr(), rng));
      b.components.push_back(random_smooth_field(model.grid_ptr(), rng));
    }
    model.project(a);
    model.project(b);
    const double r = model.lipschitz_probe(a, b);
    st.max = std::max(st.max, r);
    st.mean += r / pairs;
  }
  return st;
}

int cmd_assumptions_check(const Manifest& m) {
  const RunConfig cfg = load(m);
  std::vector<std::pair<ModelSpec, int>> targets;
  if (cfg.model_given) {
    targets.emplace_back(cfg.twin.model, cfg.twin.n);
  } else {
    for (ModelKind k : all_model_kinds()) targets.emplace_back(ModelSpec::make(k), 32);
  }
  bool pass = true;
  std::printf("%-18s %-9s %10s %8s %8s %8s %8s %10s %10s  %s\n", "model", "bc", "alpha", "omega",
              "beta", "rho", "beta_j", "A3", "probe_max", "verdict");
  for (const auto& [spec, n] : targets) {
    const GridPtr grid = Grid::make(spec.dim(), n, spec.bc);
    const Model model(spec, grid);
    const AssumptionMeta& meta = spec.meta;
    double alpha = 0.0;
    double omega = meta.omega;
    bool coercive = true;
    try {
      const Coercivity c = model.coercivity();
      alpha = c.alpha;
      omega = c.omega;
    } catch (const std::logic_error&) {
      coercive = false;
    }
    const ProbeStats probe = probe_lipschitz(model, cfg.twin.u0_seed, 20);
    const bool a3 = meta.a3_holds();
    const bool good = a3 && coercive && alpha > 0.0;
    pass = pass && good;
    std::printf("%-18s %-9s %10.6f %8.4f %8.4f %8.4f %8.4f %10.4f %10.4g  %s\n",
                std::string(to_string(spec.kind)).c_str(), std::string(to_string(spec.bc)).c_str(),
                alpha, omega, meta.beta, meta.rho, meta.beta_j, std::abs(meta.a3_value()) < 1e-12 ? 0.0 : meta.a3_value(), probe.max,
                good ? "pass" : "FAIL");
    if (!meta.exponent_ranges_hold()) {
      std::printf("  warning: exponents outside beta in (1/2, 1), beta_j in (1/2, beta]\n");
    }
  }
  return pass ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nudgelab: nudging data assimilation experiments on spectral PDE models"};
  app.set_version_flag("--version", code_version());
  app.require_subcommand(1);

  Manifest m;
  CLI::App* run = app.add_subcommand("run", "twin experiment plus decay fit");
  add_common(run, m, true);
  CLI::App* sw = app.add_subcommand("sweep", "twin experiments over a (mu, delta) grid");
  add_common(sw, m, true);
  CLI::App* obs = app.add_subcommand("observe-check", "interpolant error scaling study");
  add_common(obs, m, true);
  CLI::App* asm_check = app.add_subcommand("assumptions-check", "coercivity, Lipschitz probe and exponent checks");
  add_common(asm_check, m, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  try {
    if (run->parsed()) return cmd_run(m);
    if (sw->parsed()) return cmd_sweep(m);
    if (obs->parsed()) return cmd_observe_check(m);
    if (asm_check->parsed()) return cmd_assumptions_check(m);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return blow_up;
  } catch (const FitError& e) {
    std::cerr << "fit failed: " << e.what() << "\n";
    return check_failed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
  return failure;
}
