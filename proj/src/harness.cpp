#include "nudgelab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "nudgelab/errors.hpp"

namespace nudgelab {

std::string_view to_string(NormKind norm) {
  switch (norm) {
    case NormKind::l2:
      return "l2";
    case NormKind::h1:
      return "h1";
    case NormKind::vstar:
      return "vstar";
  }
  return "l2";
}

NormKind parse_norm(std::string_view name) {
  if (name == "l2") return NormKind::l2;
  if (name == "h1") return NormKind::h1;
  if (name == "vstar") return NormKind::vstar;
  throw ConfigError("record.norms", "unknown norm '" + std::string(name) + "'");
}

double norm_order(NormKind norm) noexcept {
  switch (norm) {
    case NormKind::l2:
      return 0.0;
    case NormKind::h1:
      return 1.0;
    case NormKind::vstar:
      return -1.0;
  }
  return 0.0;
}

std::string_view to_string(InitialGuess v0) { return v0 == InitialGuess::zero ? "zero" : "seeded"; }

InitialGuess parse_initial_guess(std::string_view name) {
  if (name == "zero") return InitialGuess::zero;
  if (name == "seeded") return InitialGuess::seeded;
  throw ConfigError("init.v0", "expected 'zero' or 'seeded', got '" + std::string(name) + "'");
}

void TwinConfig::validate() const {
  model.validate();
  scheme.validate();
  if (record_every < 1) throw ConfigError("record.every", "must be >= 1");
  if (norms.empty()) throw ConfigError("record.norms", "at least one norm is required");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("nudge.mu", "must be finite and >= 0");
  if (!(recipe.amplitude > 0.0)) throw ConfigError("init.amplitude", "must be positive");
  if (recipe.max_mode < 0) throw ConfigError("init.max_mode", "must be >= 0");
}

GridPtr TwinConfig::make_grid() const { return Grid::make(model.dim(), n, model.bc, extent); }

ModelState seeded_state(const ModelSpec& spec, const GridPtr& grid, std::uint64_t seed,
                        const RandomFieldRecipe& recipe) {
  std::mt19937_64 rng(seed);
  ModelState s;
  for (int c = 0; c < spec.components(); ++c) {
    s.components.push_back(random_smooth_field(grid, rng, recipe));
  }
  return s;
}

std::vector<std::string> TrajectoryRecord::columns() const {
  std::vector<std::string> cols{"time"};
  for (const auto& n : norms) cols.push_back("err_" + n);
  for (const auto& n : norms) cols.push_back("ref_" + n);
  for (const auto& [name, series] : diagnostics) cols.push_back("diag_" + name);
  return cols;
}

const std::vector<double>& TrajectoryRecord::column(std::string_view name) const {
  if (name == "time") return times;
  auto lookup = [&](const std::map<std::string, std::vector<double>>& m, std::string_view prefix)
      -> const std::vector<double>* {
    if (name.substr(0, prefix.size()) != prefix) return nullptr;
    auto it = m.find(std::string(name.substr(prefix.size())));
    return it == m.end() ? nullptr : &it->second;
  };
  for (auto [m, prefix] : {std::pair{&err, "err_"}, {&ref, "ref_"}, {&diagnostics, "diag_"}}) {
    if (const auto* s = lookup(*m, prefix)) return *s;
  }
  throw UsageError("trajectory has no column '" + std::string(name) + "'");
}

namespace {

ModelState zero_state(const ModelSpec& spec, const GridPtr& grid) {
  ModelState s;
  for (int c = 0; c < spec.components(); ++c) s.components.emplace_back(grid, Repr::modal);
  return s;
}

double squared(double x) { return x * x; }

// L2 inner product of two modal fields.
double inner_product(const Field& a, const Field& b) {
  const auto w = a.grid().weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += w[k] * a[k] * b[k];
  return sum;
}

}  // namespace

TwinResult run_twin_experiment(const TwinConfig& cfg) {
  cfg.validate();
  const GridPtr grid = cfg.make_grid();
  auto model = std::make_shared<const Model>(cfg.model, grid);
  const NudgeConfig nudge = make_nudge(cfg.mu, cfg.observer, cfg.delta, grid);

  ModelState u = seeded_state(cfg.model, grid, cfg.u0_seed, cfg.recipe);
  ModelState v = cfg.v0 == InitialGuess::zero ? zero_state(cfg.model, grid)
                                              : seeded_state(cfg.model, grid, cfg.v0_seed, cfg.recipe);
  model->project(u);
  model->project(v);

  TwinResult result;
  result.stability_limit =
      std::min(stability_limit(*model, nudge, u), stability_limit(*model, nudge, v));
  check_step_size(*model, nudge, u, cfg.scheme);
  check_step_size(*model, nudge, v, cfg.scheme);

  Stepper reference(model, cfg.scheme, NudgeConfig{}, "reference");
  Stepper nudged(model, cfg.scheme, nudge, "nudged");

  const bool nse = cfg.model.kind == ModelKind::nse_2d_vorticity;
  const double dt = cfg.scheme.dt;
  const double nu = cfg.model.params.nu;
  double h1_integral = 0.0;
  double dissipation = 0.0;

  TrajectoryRecord& rec = result.record;
  for (NormKind n : cfg.norms) rec.norms.emplace_back(to_string(n));

  auto record = [&](double t) {
    rec.times.push_back(t);
    const ModelState diff = u - v;
    for (NormKind n : cfg.norms) {
      const std::string key(to_string(n));
      rec.err[key].push_back(state_norm(diff, norm_order(n)));
      rec.ref[key].push_back(state_norm(u, norm_order(n)));
    }
    for (const auto& [name, value] : model->diagnostics(u)) rec.diagnostics[name].push_back(value);
    rec.diagnostics["h1_sq_integral"].push_back(h1_integral);
    if (nse) {
      rec.diagnostics["dissipation_integral"].push_back(dissipation);
      rec.diagnostics["energy_balance"].push_back(rec.diagnostics["kinetic"].back() + dissipation);
    }
  };

  record(0.0);
  const long long steps = cfg.scheme.steps();
  double h1_now = squared(state_norm(u, 1.0));
  for (long long step = 1; step <= steps; ++step) {
    const double t = static_cast<double>(step - 1) * dt;
    ModelState u_next = u;
    reference.step(u_next, t);
    nudged.step(v, t, &u, &u_next);

    const double h1_next = squared(state_norm(u_next, 1.0));
    h1_integral += 0.5 * dt * (h1_now + h1_next);
    h1_now = h1_next;
    if (nse) {
      // Quadrature matching the discrete energy identity of the step taken:
      // <w+, (w+ + w)/2> for implicit Euler, ||(w+ + w)/2||^2 for Crank-Nicolson.
      Field mid = u[0] + u_next[0];
      mid *= 0.5;
      const Field& weight = reference.last_step_euler() ? u_next[0] : mid;
      dissipation += nu * dt * inner_product(weight, mid);
    }
    u = std::move(u_next);
    if (step % cfg.record_every == 0 || step == steps) record(static_cast<double>(step) * dt);
  }
  result.u_final = std::move(u);
  result.v_final = std::move(v);
  return result;
}

DecayFit fit_decay_rate(const TrajectoryRecord& rec, std::string_view norm, double t_burn,
                        double floor, bool relative) {
  const auto it = rec.err.find(std::string(norm));
  if (it == rec.err.end()) throw UsageError("no error series for norm '" + std::string(norm) + "'");
  const std::vector<double>& series = it->second;
  double scale = 1.0;
  if (relative) {
    scale = rec.ref.at(std::string(norm)).at(0);
    if (!(scale > 0.0)) throw FitError("initial reference norm is zero; cannot fit a relative error");
  }
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (rec.times[i] < t_burn) continue;
    const double value = series[i] / scale;
    if (!(value > floor) || !std::isfinite(value)) break;
    ts.push_back(rec.times[i]);
    ys.push_back(std::log(value));
  }
  if (ts.size() < 10) {
    throw FitError("only " + std::to_string(ts.size()) +
                   " samples above the floor after burn-in (need 10); extend t_end, record "
                   "more often or raise the floor");
  }
  const double count = static_cast<double>(ts.size());
  double mt = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= count;
  my /= count;
  double stt = 0.0;
  double sty = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    sty += (ts[i] - mt) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit fit;
  fit.rate = sty / stt;
  fit.intercept = my - fit.rate * mt;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ssr = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      ssr += squared(ys[i] - (fit.intercept + fit.rate * ts[i]));
    }
    fit.r_squared = std::clamp(1.0 - ssr / syy, 0.0, 1.0);
  }
  fit.t_begin = ts.front();
  fit.t_end = ts.back();
  fit.floor = floor;
  fit.points = static_cast<int>(ts.size());
  if (!std::isfinite(fit.rate)) throw FitError("fitted rate is not finite");
  return fit;
}

bool SweepRow::operator==(const SweepRow& o) const {
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  return same(mu, o.mu) && same(delta, o.delta) && same(rate, o.rate) && same(r2, o.r2) &&
         feasible == o.feasible && blewup == o.blewup && error == o.error;
}

SweepTable sweep(const TwinConfig& base, const std::vector<double>& mu_list,
                 const std::vector<double>& delta_list, const FitSettings& fit, int parallelism) {
  if (mu_list.empty() || delta_list.empty()) throw ConfigError("sweep", "mu and delta lists must be nonempty");
  SweepTable table;
  for (double d : delta_list) {
    for (double m : mu_list) {
      SweepRow row;
      row.mu = m;
      row.delta = d;
      table.rows.push_back(row);
    }
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.delta != b.delta ? a.delta < b.delta : a.mu < b.mu;
  });

  auto run_cell = [&](SweepRow& row) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    row.rate = nan;
    row.r2 = nan;
    try {
      row.feasible = feasible_mu_interval(row.delta).contains(row.mu);
    } catch (const std::exception&) {
      row.feasible = false;
    }
    try {
      TwinConfig cfg = base;
      cfg.mu = row.mu;
      cfg.delta = row.delta;
      const TwinResult res = run_twin_experiment(cfg);
      const DecayFit f = fit_decay_rate(res.record, fit.norm, fit.burn_for(cfg.scheme.t_end),
                                        fit.floor, fit.relative);
      row.rate = f.rate;
      row.r2 = f.r_squared;
    } catch (const BlowUpError& e) {
      row.blewup = true;
      row.error = e.what();
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const int workers = std::clamp(parallelism, 1, static_cast<int>(table.rows.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < table.rows.size(); i = next++) run_cell(table.rows[i]);
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  return table;
}

}  // namespace nudgelab
