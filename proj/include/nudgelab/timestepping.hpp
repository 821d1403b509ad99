#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "nudgelab/models.hpp"
#include "nudgelab/nudging.hpp"

namespace nudgelab {

enum class Scheme { imex_euler, imex_cnab2 };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct SchemeConfig {
  Scheme scheme = Scheme::imex_cnab2;
  double dt = 1e-4;
  double t_end = 1.0;

  /// Number of steps to reach t_end (rounded to the nearest integer).
  long long steps() const;
  void validate() const;
};

/// IMEX integrator for u' + A u = F(u) - mu (I u - I ref): the linear symbol
/// and low-pass nudging are solved implicitly mode by mode, F and cell-average
/// nudging explicitly. imex_cnab2 is Crank-Nicolson / Adams-Bashforth-2 and
/// bootstraps with one Euler step. Owns the multistep history of one
/// trajectory.
class Stepper {
 public:
  Stepper(std::shared_ptr<const Model> model, SchemeConfig scheme, NudgeConfig nudge = {},
          std::string label = "reference");

  const Model& model() const noexcept { return *model_; }
  const SchemeConfig& scheme() const noexcept { return scheme_; }
  const NudgeConfig& nudge() const noexcept { return nudge_; }

  /// Advances modal `state` from t to t + dt. When nudging is active, ref_now
  /// and ref_next are the reference at t and t + dt. Throws BlowUpError
  /// labelled with this trajectory on non-finite output.
  void step(ModelState& state, double t, const ModelState* ref_now = nullptr,
            const ModelState* ref_next = nullptr);

  /// Forgets the history; the next step is an Euler step.
  void reset() noexcept { history_.reset(); }

  /// True when the most recent step was an implicit Euler step (always for
  /// imex_euler, the bootstrap step for imex_cnab2).
  bool last_step_euler() const noexcept { return last_euler_; }

 private:
  std::shared_ptr<const Model> model_;
  SchemeConfig scheme_;
  NudgeConfig nudge_;
  std::string label_;
  std::optional<ModelState> history_;  // explicit tendency at the previous step
  bool last_euler_ = true;
};

/// One step of the reference system from an empty history (Euler for both
/// schemes on the first step).
ModelState step_reference(const Model& model, const ModelState& state, const SchemeConfig& scheme);

/// One nudged step from an empty history against a reference given at the
/// same time; the reference is advanced internally to supply its value at
/// t + dt.
ModelState step_nudged(const Model& model, const NudgeConfig& nudge, const ModelState& v,
                       const ModelState& u_ref, const SchemeConfig& scheme);

/// Conservative step bound: min(1/mu for explicit nudging,
/// c_cfl / explicit_rate(initial)). +infinity when nothing limits the step.
double stability_limit(const Model& model, const NudgeConfig& nudge, const ModelState& initial,
                       double c_cfl = 1.0);

/// Throws ConfigError("scheme.dt") when dt exceeds stability_limit.
void check_step_size(const Model& model, const NudgeConfig& nudge, const ModelState& initial,
                     const SchemeConfig& scheme, double c_cfl = 1.0);

}  // namespace nudgelab
