#include "nudgelab/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nudgelab/errors.hpp"

namespace nudgelab {

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::imex_euler ? "imex_euler" : "imex_cnab2";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "imex_euler") return Scheme::imex_euler;
  if (name == "imex_cnab2") return Scheme::imex_cnab2;
  throw ConfigError("scheme.kind", "unknown scheme '" + std::string(name) + "'");
}

long long SchemeConfig::steps() const { return std::llround(t_end / dt); }

void SchemeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("scheme.dt", "must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("scheme.t_end", "must be positive");
  if (steps() < 1) throw ConfigError("scheme.t_end", "shorter than one step");
}

Stepper::Stepper(std::shared_ptr<const Model> model, SchemeConfig scheme, NudgeConfig nudge,
                 std::string label)
    : model_(std::move(model)), scheme_(scheme), nudge_(std::move(nudge)), label_(std::move(label)) {
  scheme_.validate();
  if (nudge_.observer && !nudge_.observer->grid_ptr()->same_as(model_->grid())) {
    throw UsageError("observer and model live on different grids");
  }
}

void Stepper::step(ModelState& state, double t, const ModelState* ref_now,
                   const ModelState* ref_next) {
  const bool nudged = nudge_.active();
  if (nudged && (!ref_now || !ref_next)) {
    throw UsageError("nudged step needs the reference at t and t + dt");
  }
  const double dt = scheme_.dt;
  const double mu = nudge_.mu;
  ModelState a = to_modal(state);

  ModelState explicit_part;
  try {
    explicit_part = model_->nonlinearity(a, Dealias::padded, t);
  } catch (const BlowUpError&) {
    throw BlowUpError(t, label_);
  }
  if (nudged && !nudge_.implicit()) {
    const ModelState n = nudge_tendency(nudge_, a, *ref_now);
    for (std::size_t c = 0; c < a.size(); ++c) explicit_part[c] += n[c];
  }

  const bool cnab2 = scheme_.scheme == Scheme::imex_cnab2 && history_.has_value();
  const bool implicit_nudge = nudged && nudge_.implicit();
  std::span<const unsigned char> observed;
  if (implicit_nudge) observed = nudge_.observer->observed_modes();

  ModelState next = a;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const SpectralSymbol& sym = model_->symbols()[c];
    const Field& ac = a[c];
    const Field& e = explicit_part[c];
    Field& out = next[c];
    for (std::size_t k = 0; k < ac.size(); ++k) {
      if (!sym.active[k]) {
        out[k] = 0.0;
        continue;
      }
      const double lam = sym.values[k];
      double un;
      if (cnab2) {
        const double e_old = (*history_)[c][k];
        un = ((1.0 - 0.5 * dt * lam) * ac[k] + dt * (1.5 * e[k] - 0.5 * e_old)) /
             (1.0 + 0.5 * dt * lam);
      } else {
        un = (ac[k] + dt * e[k]) / (1.0 + dt * lam);
      }
      if (implicit_nudge && observed[k]) {
        // Written relative to the reference so that v = u reproduces the
        // reference step bit for bit.
        const double r1 = (*ref_next)[c][k];
        if (cnab2) {
          const double r0 = (*ref_now)[c][k];
          un = r1 + ((1.0 + 0.5 * dt * lam) * (un - r1) - 0.5 * dt * mu * (ac[k] - r0)) /
                        (1.0 + 0.5 * dt * (lam + mu));
        } else {
          un = r1 + (un - r1) * (1.0 + dt * lam) / (1.0 + dt * (lam + mu));
        }
      }
      out[k] = un;
    }
  }
  if (!next.all_finite()) throw BlowUpError(t + dt, label_);
  last_euler_ = !cnab2;
  if (scheme_.scheme == Scheme::imex_cnab2) history_ = std::move(explicit_part);
  state = std::move(next);
}

ModelState step_reference(const Model& model, const ModelState& state, const SchemeConfig& scheme) {
  auto shared = std::make_shared<const Model>(model);
  Stepper stepper(shared, scheme);
  ModelState out = to_modal(state);
  stepper.step(out, 0.0);
  return out;
}

ModelState step_nudged(const Model& model, const NudgeConfig& nudge, const ModelState& v,
                       const ModelState& u_ref, const SchemeConfig& scheme) {
  auto shared = std::make_shared<const Model>(model);
  const ModelState ref_now = to_modal(u_ref);
  const ModelState ref_next = step_reference(model, ref_now, scheme);
  Stepper stepper(shared, scheme, nudge, "nudged");
  ModelState out = to_modal(v);
  stepper.step(out, 0.0, &ref_now, &ref_next);
  return out;
}

double stability_limit(const Model& model, const NudgeConfig& nudge, const ModelState& initial,
                       double c_cfl) {
  double limit = std::numeric_limits<double>::infinity();
  if (nudge.active() && !nudge.implicit()) limit = 1.0 / nudge.mu;
  const double rate = model.explicit_rate(initial);
  if (rate > 0.0) limit = std::min(limit, c_cfl / rate);
  return limit;
}

void check_step_size(const Model& model, const NudgeConfig& nudge, const ModelState& initial,
                     const SchemeConfig& scheme, double c_cfl) {
  const double limit = stability_limit(model, nudge, initial, c_cfl);
  if (scheme.dt > limit * (1.0 + 1e-12)) {
    throw ConfigError("scheme.dt", "dt = " + std::to_string(scheme.dt) +
                                       " exceeds the stability limit " + std::to_string(limit));
  }
}

}  // namespace nudgelab
