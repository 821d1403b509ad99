#pragma once

#include <optional>

#include "nudgelab/models.hpp"
#include "nudgelab/observation.hpp"

namespace nudgelab {

/// Relaxation -mu (I v - I u) towards observations of a reference trajectory.
/// mu = 0 (or no observer) disables nudging.
struct NudgeConfig {
  double mu = 0.0;
  std::optional<ObservationOperator> observer;

  bool active() const noexcept { return mu > 0.0 && observer.has_value(); }
  /// Low-pass observers are diagonal in the modal basis and are folded into
  /// the implicit solve; cell averages are applied explicitly.
  bool implicit() const noexcept {
    return observer.has_value() && observer->kind() == ObserverKind::low_pass;
  }
};

/// Validates mu >= 0 and builds the observer.
NudgeConfig make_nudge(double mu, ObserverKind kind, double delta, GridPtr grid);

/// -mu (I v - I u_ref), modal, applied to every component.
ModelState nudge_tendency(const NudgeConfig& cfg, const ModelState& v, const ModelState& u_ref);

/// Solution set of c1 (1 + mu^2 delta^2 - mu) < 0 in mu.
struct MuInterval {
  bool feasible = false;
  double lower = 0.0;  ///< open interval (lower, upper) when feasible
  double upper = 0.0;
  double c1 = 1.0;     ///< scales the decay rate, not the interval

  bool contains(double mu) const noexcept { return feasible && mu > lower && mu < upper; }
};

/// 1 + mu^2 delta^2 - mu
double feasibility_margin(double mu, double delta) noexcept;

MuInterval feasible_mu_interval(double delta, double c1 = 1.0);

}  // namespace nudgelab
