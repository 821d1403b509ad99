#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nudgelab/field.hpp"
#include "nudgelab/spectral.hpp"

namespace nudgelab {

enum class ModelKind { allen_cahn_1d, cahn_hilliard_1d, cahn_hilliard_2d, nse_2d_vorticity, bidomain_fhn };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
std::vector<ModelKind> all_model_kinds();

/// Exponents of the structural assumptions as claimed for a model, plus the
/// Sobolev orders realizing V* and V on its discrete state.
struct AssumptionMeta {
  double beta = 0.0;
  double rho = 0.0;
  double beta_j = 0.0;
  double omega = 0.0;
  double vstar_order = -1.0;
  double v_order = 1.0;

  /// Sobolev order realizing the interpolation space V_beta.
  double vbeta_order() const { return (1.0 - beta) * vstar_order + beta * v_order; }
  /// rho (beta_j - 1/2) + beta
  double a3_value() const { return rho * (beta_j - 0.5) + beta; }
  bool a3_holds() const { return a3_value() <= 1.0 + 1e-12; }
  /// beta in (1/2, 1) and beta_j in (1/2, beta].
  bool exponent_ranges_hold() const {
    return beta > 0.5 && beta < 1.0 && beta_j > 0.5 && beta_j <= beta && rho >= 0.0;
  }
};

struct ModelParams {
  double nu = 1.0;     ///< NSE viscosity
  double shift = 1.0;  ///< Cahn-Hilliard shift (A + shift)
  // FitzHugh-Nagumo bidomain
  double a = 0.5;
  double b = 1.0;
  double c = 0.5;
  double delta_fh = 0.2;
  double epsilon = 0.1;
  double a1 = 2.0;
  double a2 = 2.0;
  /// Multiplies the whole nonlinearity: 1 normal, 0 disables F, -1 flips
  /// its sign (divergence test hook).
  double nonlinear_scale = 1.0;
};

struct ModelSpec {
  ModelKind kind = ModelKind::allen_cahn_1d;
  ModelParams params;
  Boundary bc = Boundary::dirichlet;
  AssumptionMeta meta;

  /// Spec with the stored default exponents and the model's natural boundary family.
  static ModelSpec make(ModelKind kind);

  int dim() const;
  int components() const;
  /// Pad factor numerator/denominator for exact dealiasing of F.
  std::pair<int, int> pad_factor() const;
  /// Throws ConfigError on incompatible bc or violated parameter conditions.
  void validate() const;
  /// a - epsilon + delta - (a+1)^2/4
  double bidomain_margin() const;
};

/// One Field per unknown: u for scalar models, (u, w) for bidomain, the
/// vorticity for NSE.
struct ModelState {
  std::vector<Field> components;

  std::size_t size() const noexcept { return components.size(); }
  Field& operator[](std::size_t i) { return components[i]; }
  const Field& operator[](std::size_t i) const { return components[i]; }
  bool all_finite() const noexcept;
};

ModelState to_modal(const ModelState& s);
ModelState to_physical(const ModelState& s);
ModelState operator-(const ModelState& a, const ModelState& b);
/// sqrt(sum over components of sobolev_norm^2)
double state_norm(const ModelState& s, double order);

enum class Dealias { padded, collocation };

struct Coercivity {
  double alpha = 0.0;
  double omega = 0.0;
};

using Diagnostics = std::map<std::string, double>;

/// A ModelSpec bound to a grid with its symbols and padded grid cached.
class Model {
 public:
  Model(ModelSpec spec, GridPtr grid);

  const ModelSpec& spec() const noexcept { return spec_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Grid& grid() const noexcept { return *grid_; }
  int components() const noexcept { return spec_.components(); }
  const std::vector<SpectralSymbol>& symbols() const noexcept { return symbols_; }

  /// Modal tendency F(state). Throws BlowUpError (stamped with `time`) if
  /// the products overflow.
  ModelState nonlinearity(const ModelState& state, Dealias mode = Dealias::padded,
                          double time = std::numeric_limits<double>::quiet_NaN()) const;

  Coercivity coercivity() const;
  double lipschitz_probe(const ModelState& u1, const ModelState& u2) const;
  Diagnostics diagnostics(const ModelState& state) const;

  /// Rate bound of the explicitly treated part on `state`, used by the
  /// time-step guard. Zero when F is disabled.
  double explicit_rate(const ModelState& state) const;

  /// Zeroes modes the model constrains (e.g. the vorticity mean).
  void project(ModelState& modal_state) const;

 private:
  Field pad_to_physical(const Field& modal) const;
  Field back_to_modal(const Field& fine_physical) const;

  ModelSpec spec_;
  GridPtr grid_;
  GridPtr fine_;
  std::vector<SpectralSymbol> symbols_;
};

std::vector<SpectralSymbol> linear_symbol(const ModelSpec& spec, const GridPtr& grid);
ModelState eval_nonlinearity(const ModelSpec& spec, const ModelState& state,
                             Dealias mode = Dealias::padded);
Coercivity coercivity_constant(const ModelSpec& spec, const GridPtr& grid);
double lipschitz_probe(const ModelSpec& spec, const ModelState& u1, const ModelState& u2);
Diagnostics diagnostics(const ModelSpec& spec, const ModelState& state);

/// Streamfunction psi with -Laplace(psi) = omega (mean-free), modal.
Field streamfunction(const Field& vorticity);
/// Velocity (d psi/dy, -d psi/dx), modal.
std::pair<Field, Field> velocity(const Field& vorticity);

}  // namespace nudgelab
