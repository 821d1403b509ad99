#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nudgelab/models.hpp"
#include "nudgelab/nudging.hpp"
#include "nudgelab/random_field.hpp"
#include "nudgelab/timestepping.hpp"

namespace nudgelab {

enum class NormKind { l2, h1, vstar };

std::string_view to_string(NormKind norm);
NormKind parse_norm(std::string_view name);
/// Sobolev order of the recorded norm: 0, 1 and -1.
double norm_order(NormKind norm) noexcept;

enum class InitialGuess { zero, seeded };

std::string_view to_string(InitialGuess v0);
InitialGuess parse_initial_guess(std::string_view name);

struct TwinConfig {
  ModelSpec model = ModelSpec::make(ModelKind::allen_cahn_1d);
  int n = 128;
  double extent = 1.0;
  SchemeConfig scheme;
  double mu = 0.0;
  ObserverKind observer = ObserverKind::low_pass;
  double delta = 0.125;
  std::uint64_t u0_seed = 1;
  InitialGuess v0 = InitialGuess::zero;
  std::uint64_t v0_seed = 2;
  RandomFieldRecipe recipe;  ///< initial data recipe for both seeds
  int record_every = 10;
  std::vector<NormKind> norms{NormKind::l2, NormKind::h1, NormKind::vstar};

  void validate() const;
  GridPtr make_grid() const;
};

/// Seeded initial state: one random smooth field per component, drawn in
/// order from a single generator.
ModelState seeded_state(const ModelSpec& spec, const GridPtr& grid, std::uint64_t seed,
                        const RandomFieldRecipe& recipe);

/// Time series of a twin experiment, all columns sampled at `times`.
/// err and ref are keyed by norm name; diagnostics hold the model
/// diagnostics of the reference plus the running integrals
/// h1_sq_integral (int ||u||_{H^1}^2) and, for NSE, dissipation_integral
/// (nu int ||omega||^2) and energy_balance (kinetic + dissipation_integral).
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<std::string> norms;
  std::map<std::string, std::vector<double>> err;
  std::map<std::string, std::vector<double>> ref;
  std::map<std::string, std::vector<double>> diagnostics;

  std::size_t size() const noexcept { return times.size(); }
  /// time, err_<norm>..., ref_<norm>..., diag_<name>... in that order.
  std::vector<std::string> columns() const;
  /// Column by its exported name.
  const std::vector<double>& column(std::string_view name) const;

  bool operator==(const TrajectoryRecord&) const = default;
};

struct TwinResult {
  TrajectoryRecord record;
  ModelState u_final;
  ModelState v_final;
  double stability_limit = 0.0;
};

/// Runs reference and nudged trajectories in lockstep, observing the
/// reference every step. Throws ConfigError when dt violates the stability
/// limit and BlowUpError naming the trajectory that failed.
TwinResult run_twin_experiment(const TwinConfig& cfg);

struct DecayFit {
  double rate = 0.0;  ///< slope of log(err) against t
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  double floor = 0.0;
  int points = 0;
};

/// Least-squares line through (t, log err) over t >= t_burn, up to the first
/// sample at or below `floor`. With `relative` the series is divided by its
/// initial reference norm first. Throws FitError with fewer than 10 points.
DecayFit fit_decay_rate(const TrajectoryRecord& rec, std::string_view norm, double t_burn,
                        double floor = 1e-13, bool relative = false);

struct FitSettings {
  std::string norm = "l2";
  double t_burn = -1.0;  ///< negative selects 10% of t_end
  double floor = 1e-13;
  bool relative = true;

  double burn_for(double t_end) const noexcept { return t_burn < 0.0 ? 0.1 * t_end : t_burn; }
};

struct SweepRow {
  double mu = 0.0;
  double delta = 0.0;
  double rate = 0.0;  ///< NaN when the cell failed
  double r2 = 0.0;
  bool feasible = false;
  bool blewup = false;
  std::string error;  ///< empty on success

  bool operator==(const SweepRow& o) const;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  bool operator==(const SweepTable&) const = default;
};

/// One twin experiment and fit per (mu, delta), run on up to `parallelism`
/// threads. Failures are recorded in their row; rows are sorted by (delta, mu).
SweepTable sweep(const TwinConfig& base, const std::vector<double>& mu_list,
                 const std::vector<double>& delta_list, const FitSettings& fit,
                 int parallelism = 1);

}  // namespace nudgelab
