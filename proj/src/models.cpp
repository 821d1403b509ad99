#include "nudgelab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nudgelab/errors.hpp"

namespace nudgelab {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::allen_cahn_1d:
      return "allen_cahn_1d";
    case ModelKind::cahn_hilliard_1d:
      return "cahn_hilliard_1d";
    case ModelKind::cahn_hilliard_2d:
      return "cahn_hilliard_2d";
    case ModelKind::nse_2d_vorticity:
      return "nse_2d_vorticity";
    case ModelKind::bidomain_fhn:
      return "bidomain_fhn";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind k : all_model_kinds()) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("model.name", "unknown model '" + std::string(name) + "'");
}

std::vector<ModelKind> all_model_kinds() {
  return {ModelKind::allen_cahn_1d, ModelKind::cahn_hilliard_1d, ModelKind::cahn_hilliard_2d,
          ModelKind::nse_2d_vorticity, ModelKind::bidomain_fhn};
}

ModelSpec ModelSpec::make(ModelKind kind) {
  ModelSpec s;
  s.kind = kind;
  switch (kind) {
    case ModelKind::allen_cahn_1d:
      s.bc = Boundary::dirichlet;
      s.meta = {2.0 / 3.0, 2.0, 2.0 / 3.0, 0.0, -1.0, 1.0};
      break;
    case ModelKind::cahn_hilliard_1d:
    case ModelKind::cahn_hilliard_2d:
      s.bc = Boundary::neumann;
      s.meta = {2.0 / 3.0, 2.0, 2.0 / 3.0, s.params.shift, -2.0, 2.0};
      break;
    case ModelKind::nse_2d_vorticity:
      s.bc = Boundary::periodic;
      s.meta = {0.75, 1.0, 0.75, 0.0, -2.0, 0.0};
      break;
    case ModelKind::bidomain_fhn:
      s.bc = Boundary::neumann;
      s.meta = {1.0 / 3.0, 2.0, 1.0 / 3.0, s.params.epsilon, 0.0, 2.0};
      break;
  }
  return s;
}

int ModelSpec::dim() const {
  switch (kind) {
    case ModelKind::allen_cahn_1d:
    case ModelKind::cahn_hilliard_1d:
      return 1;
    default:
      return 2;
  }
}

int ModelSpec::components() const { return kind == ModelKind::bidomain_fhn ? 2 : 1; }

std::pair<int, int> ModelSpec::pad_factor() const {
  if (kind == ModelKind::nse_2d_vorticity) return {3, 2};
  return {2, 1};
}

double ModelSpec::bidomain_margin() const {
  const auto& p = params;
  return p.a - p.epsilon + p.delta_fh - (p.a + 1.0) * (p.a + 1.0) / 4.0;
}

void ModelSpec::validate() const {
  const std::string name(to_string(kind));
  auto bad_bc = [&] {
    throw ConfigError("grid.bc", "boundary family " + std::string(to_string(bc)) +
                                     " is not supported by " + name);
  };
  switch (kind) {
    case ModelKind::allen_cahn_1d:
      if (bc != Boundary::dirichlet) bad_bc();
      break;
    case ModelKind::cahn_hilliard_1d:
    case ModelKind::cahn_hilliard_2d:
      if (bc == Boundary::dirichlet) bad_bc();
      if (!(params.shift >= 0.0)) throw ConfigError("model.shift", "must be >= 0");
      break;
    case ModelKind::nse_2d_vorticity:
      if (bc != Boundary::periodic) bad_bc();
      if (!(params.nu > 0.0)) throw ConfigError("model.nu", "viscosity must be positive");
      break;
    case ModelKind::bidomain_fhn: {
      if (bc == Boundary::dirichlet) bad_bc();
      const auto& p = params;
      if (!(p.a > 0.0 && p.a < 1.0)) throw ConfigError("model.a", "must lie in (0, 1)");
      if (!(p.b > 0.0)) throw ConfigError("model.b", "must be positive");
      if (!(p.c > 0.0)) throw ConfigError("model.c", "must be positive");
      if (!(p.delta_fh > 0.0)) throw ConfigError("model.delta_fh", "must be positive");
      if (!(p.epsilon > 0.0)) throw ConfigError("model.epsilon", "must be positive");
      if (!(p.a1 > 0.0 && p.a2 > 0.0)) {
        throw ConfigError("model.a1", "conductivities must be positive");
      }
      if (bidomain_margin() < 0.0) {
        throw ConfigError("model", "bidomain parameters violate a - epsilon + delta_fh - (a+1)^2/4 >= 0 "
                                   "(margin " + std::to_string(bidomain_margin()) + ")");
      }
      break;
    }
  }
  if (!std::isfinite(params.nonlinear_scale)) {
    throw ConfigError("model.nonlinear_scale", "must be finite");
  }
}

bool ModelState::all_finite() const noexcept {
  return std::all_of(components.begin(), components.end(),
                     [](const Field& f) { return f.all_finite(); });
}

ModelState to_modal(const ModelState& s) {
  ModelState out;
  for (const Field& f : s.components) out.components.push_back(to_modal(f));
  return out;
}

ModelState to_physical(const ModelState& s) {
  ModelState out;
  for (const Field& f : s.components) out.components.push_back(to_physical(f));
  return out;
}

ModelState operator-(const ModelState& a, const ModelState& b) {
  if (a.size() != b.size()) throw UsageError("states have different component counts");
  ModelState out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.components.push_back(to_modal(a[i]) - to_modal(b[i]));
  }
  return out;
}

double state_norm(const ModelState& s, double order) {
  double sum = 0.0;
  for (const Field& f : s.components) {
    const double n = sobolev_norm(f, order);
    sum += n * n;
  }
  return std::sqrt(sum);
}

std::vector<SpectralSymbol> linear_symbol(const ModelSpec& spec, const GridPtr& grid) {
  spec.validate();
  if (grid->bc() != spec.bc) {
    throw ConfigError("grid.bc", "grid boundary family does not match the model");
  }
  if (grid->dim() != spec.dim()) {
    throw ConfigError("grid.dim", std::string(to_string(spec.kind)) + " needs a " +
                                      std::to_string(spec.dim()) + "D grid");
  }
  const auto lam = grid->laplacian();
  const std::size_t size = grid->size();
  auto make = [&](auto&& fn) {
    SpectralSymbol s{grid, std::vector<double>(size), std::vector<unsigned char>(size, 1)};
    for (std::size_t k = 0; k < size; ++k) s.values[k] = fn(lam[k]);
    return s;
  };
  const auto& p = spec.params;
  switch (spec.kind) {
    case ModelKind::allen_cahn_1d:
      return {make([](double l) { return l; })};
    case ModelKind::cahn_hilliard_1d:
    case ModelKind::cahn_hilliard_2d:
      return {make([&](double l) { return l * l + p.shift; })};
    case ModelKind::nse_2d_vorticity: {
      auto s = make([&](double l) { return p.nu * l; });
      s.active[0] = 0;  // mean vorticity is constrained to zero
      return {s};
    }
    case ModelKind::bidomain_fhn: {
      const double harmonic = p.a1 * p.a2 / (p.a1 + p.a2);
      return {make([&](double l) { return harmonic * l + p.epsilon; }),
              make([&](double) { return p.b; })};
    }
  }
  return {};
}

Field streamfunction(const Field& vorticity) {
  Field psi = to_modal(vorticity);
  const auto lam = vorticity.grid().laplacian();
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = lam[k] > 0.0 ? psi[k] / lam[k] : 0.0;
  return psi;
}

std::pair<Field, Field> velocity(const Field& vorticity) {
  const Field psi = streamfunction(vorticity);
  Field u = derivative(psi, 1, 1);
  Field v = derivative(psi, 0, 1);
  v *= -1.0;
  return {std::move(u), std::move(v)};
}

Model::Model(ModelSpec spec, GridPtr grid) : spec_(std::move(spec)), grid_(std::move(grid)) {
  symbols_ = linear_symbol(spec_, grid_);
  const auto [num, den] = spec_.pad_factor();
  fine_ = grid_->padded(num, den);
}

Field Model::pad_to_physical(const Field& modal) const {
  return inverse_transform(pad_modal(modal, fine_));
}

Field Model::back_to_modal(const Field& fine_physical) const {
  return truncate_modal(forward_transform(fine_physical), grid_);
}

void Model::project(ModelState& modal_state) const {
  for (std::size_t c = 0; c < modal_state.size(); ++c) {
    const auto& active = symbols_[c].active;
    Field& f = modal_state[c];
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (!active[k]) f[k] = 0.0;
    }
  }
}

namespace {

void require_state(const Model& m, const ModelState& s) {
  if (static_cast<int>(s.size()) != m.components()) {
    throw UsageError("state has " + std::to_string(s.size()) + " components, model expects " +
                     std::to_string(m.components()));
  }
  for (const Field& f : s.components) {
    if (!f.grid().same_as(m.grid())) throw UsageError("state lives on a different grid");
  }
}

}  // namespace

ModelState Model::nonlinearity(const ModelState& state, Dealias mode, double time) const {
  require_state(*this, state);
  const auto& p = spec_.params;
  const double scale = p.nonlinear_scale;
  const bool padded = mode == Dealias::padded;

  // Evaluates a pointwise map of the components on the product grid and
  // returns its modal coefficients on the base grid.
  auto product = [&](const std::vector<Field>& modal_inputs, auto&& pointwise) {
    std::vector<Field> phys;
    for (const Field& f : modal_inputs) {
      phys.push_back(padded ? pad_to_physical(f) : inverse_transform(f));
    }
    Field out(phys.front().grid_ptr(), Repr::physical);
    std::vector<double> vals(phys.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
      for (std::size_t c = 0; c < phys.size(); ++c) vals[c] = phys[c][j];
      out[j] = pointwise(vals);
    }
    return padded ? back_to_modal(out) : forward_transform(out);
  };

  ModelState out;
  ModelState modal = to_modal(state);
  switch (spec_.kind) {
    case ModelKind::allen_cahn_1d: {
      Field f = product({modal[0]}, [](const std::vector<double>& v) {
        return v[0] - v[0] * v[0] * v[0];
      });
      out.components.push_back(scale * std::move(f));
      break;
    }
    case ModelKind::cahn_hilliard_1d:
    case ModelKind::cahn_hilliard_2d: {
      Field f = product({modal[0]}, [](const std::vector<double>& v) {
        return v[0] * v[0] * v[0] - v[0];
      });
      out.components.push_back(scale * laplacian(f));
      break;
    }
    case ModelKind::nse_2d_vorticity: {
      const Field& w = modal[0];
      auto [u, v] = velocity(w);
      const Field wx = derivative(w, 0, 1);
      const Field wy = derivative(w, 1, 1);
      Field f = product({u, v, wx, wy}, [](const std::vector<double>& q) {
        return -(q[0] * q[2] + q[1] * q[3]);
      });
      f[0] = 0.0;
      out.components.push_back(scale * std::move(f));
      break;
    }
    case ModelKind::bidomain_fhn: {
      const double lin = p.a - p.epsilon + p.delta_fh;
      const double quad = p.a + 1.0;
      Field fu = product({modal[0], modal[1]}, [&](const std::vector<double>& q) {
        const double u = q[0];
        return -u * u * u + quad * u * u - q[1] - lin * u;
      });
      Field fw = p.c * modal[0];
      out.components.push_back(scale * std::move(fu));
      out.components.push_back(scale * std::move(fw));
      break;
    }
  }
  if (!out.all_finite()) throw BlowUpError(time, "nonlinearity");
  return out;
}

Coercivity Model::coercivity() const {
  double alpha = std::numeric_limits<double>::infinity();
  for (const auto& sym : symbols_) {
    for (std::size_t k = 0; k < sym.values.size(); ++k) {
      if (!sym.active[k]) continue;
      const double l = sym.values[k];
      alpha = std::min(alpha, l / (1.0 + l));
    }
  }
  if (!(alpha > 0.0)) {
    throw std::logic_error("model " + std::string(to_string(spec_.kind)) +
                           " has a non-coercive linear symbol (alpha = " + std::to_string(alpha) +
                           ")");
  }
  return {alpha, spec_.meta.omega};
}

double Model::lipschitz_probe(const ModelState& u1, const ModelState& u2) const {
  const ModelState diff = u1 - u2;
  const double vb = spec_.meta.vbeta_order();
  const double dnorm = state_norm(diff, vb);
  if (dnorm == 0.0) return 0.0;
  const ModelState dF = nonlinearity(u1) - nonlinearity(u2);
  const double rho = spec_.meta.rho;
  const double growth = 1.0 + std::pow(state_norm(u1, vb), rho) + std::pow(state_norm(u2, vb), rho);
  return state_norm(dF, spec_.meta.vstar_order) / (growth * dnorm);
}

Diagnostics Model::diagnostics(const ModelState& state) const {
  require_state(*this, state);
  const ModelState modal = to_modal(state);
  Diagnostics d;
  d["l2"] = state_norm(modal, 0.0);
  d["h1"] = state_norm(modal, 1.0);
  const Grid& g = *grid_;
  const auto lam = g.laplacian();
  const auto w = g.weights();
  switch (spec_.kind) {
    case ModelKind::cahn_hilliard_1d:
    case ModelKind::cahn_hilliard_2d: {
      const Field& u = modal[0];
      d["mass"] = u[0] * g.domain_volume();
      double grad = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) grad += w[k] * lam[k] * u[k] * u[k];
      // u^2 is represented exactly on the doubled grid, so int u^4 = ||u^2||^2.
      Field sq = pad_to_physical(u);
      for (double& v : sq.values()) v = v * v;
      const double quartic = std::pow(nodal_l2_norm(sq), 2);
      d["lyapunov"] = 0.5 * grad + 0.25 * quartic;
      break;
    }
    case ModelKind::nse_2d_vorticity: {
      const Field& om = modal[0];
      double kinetic = 0.0;
      double enstrophy = 0.0;
      for (std::size_t k = 0; k < om.size(); ++k) {
        enstrophy += w[k] * om[k] * om[k];
        if (lam[k] > 0.0) kinetic += w[k] * om[k] * om[k] / lam[k];
      }
      d["kinetic"] = 0.5 * kinetic;
      d["enstrophy"] = 0.5 * enstrophy;
      d["dissipation"] = spec_.params.nu * enstrophy;
      break;
    }
    case ModelKind::bidomain_fhn: {
      const double lu = sobolev_norm(modal[0], 0.0);
      const double lw = sobolev_norm(modal[1], 0.0);
      d["l2_u"] = lu;
      d["l2_w"] = lw;
      d["energy"] = 0.5 * (lu * lu + lw * lw / spec_.params.c);
      break;
    }
    case ModelKind::allen_cahn_1d:
      break;
  }
  return d;
}

double Model::explicit_rate(const ModelState& state) const {
  require_state(*this, state);
  const auto& p = spec_.params;
  const double s = std::abs(p.nonlinear_scale);
  if (s == 0.0) return 0.0;
  const ModelState phys = to_physical(state);
  double rate = 0.0;
  switch (spec_.kind) {
    case ModelKind::allen_cahn_1d:
      for (double u : phys[0].values()) rate = std::max(rate, s * std::abs(1.0 - 3.0 * u * u));
      break;
    case ModelKind::cahn_hilliard_1d:
    case ModelKind::cahn_hilliard_2d: {
      // Frozen-coefficient mode analysis of (1 + dt lam g) / (1 + dt lam^2):
      // stable for all lam when dt g^2 <= 8, growth at most g^2/4.
      double g = 0.0;
      for (double u : phys[0].values()) g = std::max(g, s * std::abs(3.0 * u * u - 1.0));
      rate = 0.25 * g * g;
      break;
    }
    case ModelKind::nse_2d_vorticity: {
      auto [u, v] = velocity(to_modal(phys[0]));
      const Field up = inverse_transform(u);
      const Field vp = inverse_transform(v);
      double umax = 0.0;
      for (std::size_t j = 0; j < up.size(); ++j) {
        umax = std::max(umax, std::abs(up[j]) + std::abs(vp[j]));
      }
      const double kmax = grid_->frequency(grid_->n() / 2);
      rate = s * umax * kmax;
      break;
    }
    case ModelKind::bidomain_fhn: {
      const double lin = p.a - p.epsilon + p.delta_fh;
      for (double u : phys[0].values()) {
        const double j11 = -3.0 * u * u + 2.0 * (p.a + 1.0) * u - lin;
        rate = std::max(rate, s * std::max(std::abs(j11) + 1.0, p.c));
      }
      break;
    }
  }
  return rate;
}

ModelState eval_nonlinearity(const ModelSpec& spec, const ModelState& state, Dealias mode) {
  return Model(spec, state[0].grid_ptr()).nonlinearity(state, mode);
}

Coercivity coercivity_constant(const ModelSpec& spec, const GridPtr& grid) {
  return Model(spec, grid).coercivity();
}

double lipschitz_probe(const ModelSpec& spec, const ModelState& u1, const ModelState& u2) {
  return Model(spec, u1[0].grid_ptr()).lipschitz_probe(u1, u2);
}

Diagnostics diagnostics(const ModelSpec& spec, const ModelState& state) {
  return Model(spec, state[0].grid_ptr()).diagnostics(state);
}

}  // namespace nudgelab
