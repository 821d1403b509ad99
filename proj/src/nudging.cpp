#include "nudgelab/nudging.hpp"

#include <cmath>

#include "nudgelab/errors.hpp"

namespace nudgelab {

NudgeConfig make_nudge(double mu, ObserverKind kind, double delta, GridPtr grid) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("nudge.mu", "must be finite and >= 0");
  NudgeConfig cfg;
  cfg.mu = mu;
  cfg.observer.emplace(kind, delta, std::move(grid));
  return cfg;
}

ModelState nudge_tendency(const NudgeConfig& cfg, const ModelState& v, const ModelState& u_ref) {
  if (v.size() != u_ref.size()) throw UsageError("nudge_tendency: component count mismatch");
  ModelState out;
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (!v[c].grid().same_as(u_ref[c].grid())) {
      throw UsageError("nudge_tendency: states live on different grids");
    }
    Field diff = to_modal(v[c]) - to_modal(u_ref[c]);
    if (cfg.active()) {
      diff = cfg.observer->observe(diff);
      diff *= -cfg.mu;
    } else {
      diff *= 0.0;
    }
    out.components.push_back(std::move(diff));
  }
  return out;
}

double feasibility_margin(double mu, double delta) noexcept {
  return 1.0 + mu * mu * delta * delta - mu;
}

MuInterval feasible_mu_interval(double delta, double c1) {
  if (!(delta > 0.0)) throw UsageError("feasible_mu_interval: delta must be positive");
  if (!(c1 > 0.0)) throw UsageError("feasible_mu_interval: c1 must be positive");
  MuInterval out;
  out.c1 = c1;
  const double disc = 1.0 - 4.0 * delta * delta;
  if (!(disc > 0.0)) return out;
  const double root = std::sqrt(disc);
  out.feasible = true;
  // Product of the roots is 1/delta^2; avoids cancellation in 1 - root.
  out.lower = 2.0 / (1.0 + root);
  out.upper = (1.0 + root) / (2.0 * delta * delta);
  return out;
}

}  // namespace nudgelab
