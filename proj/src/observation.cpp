#include "nudgelab/observation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nudgelab/errors.hpp"
#include "nudgelab/spectral.hpp"

namespace nudgelab {

std::string_view to_string(ObserverKind kind) {
  return kind == ObserverKind::low_pass ? "low_pass" : "volume_average";
}

ObserverKind parse_observer_kind(std::string_view name) {
  if (name == "low_pass") return ObserverKind::low_pass;
  if (name == "volume_average") return ObserverKind::volume_average;
  throw ConfigError("observer", "unknown observer kind '" + std::string(name) + "'");
}

ObservationOperator::ObservationOperator(ObserverKind kind, double delta, GridPtr grid)
    : kind_(kind), delta_(delta), grid_(std::move(grid)) {
  if (!grid_) throw UsageError("observer requires a grid");
  const double extent = grid_->extent();
  if (!(delta > 0.0) || delta > extent) {
    throw ConfigError("delta", "must satisfy 0 < delta <= domain extent, got " +
                                   std::to_string(delta));
  }
  const int coarse = static_cast<int>(std::floor(extent / delta + 1e-12));
  const Grid& g = *grid_;
  if (kind_ == ObserverKind::low_pass) {
    cutoff_ = coarse;
    observed_.resize(g.size());
    const auto radius = g.mode_radius();
    for (std::size_t k = 0; k < g.size(); ++k) {
      observed_[k] = radius[k] <= cutoff_ + 1e-12 ? 1 : 0;
    }
    return;
  }
  cells_ = std::max(1, std::min(coarse, g.n()));
  const int m = g.axis_size();
  const long long n = g.n();
  const long long c = cells_;
  node_cell_.resize(m);
  for (int j = 0; j < m; ++j) {
    long long cell = 0;
    switch (g.bc()) {
      case Boundary::periodic:
        cell = (j * c) / n;
        break;
      case Boundary::dirichlet:
        cell = ((j + 1) * c) / n;
        break;
      case Boundary::neumann:
        cell = ((2 * j + 1) * c) / (2 * n);
        break;
    }
    node_cell_[j] = static_cast<int>(std::min(cell, c - 1));
  }
  const std::size_t ncoarse = g.dim() == 1 ? cells_ : static_cast<std::size_t>(cells_) * cells_;
  cell_count_.assign(ncoarse, 0.0);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto idx = g.unflatten(flat);
    const std::size_t cell = g.dim() == 1 ? node_cell_[idx[0]]
                                          : static_cast<std::size_t>(node_cell_[idx[0]]) * cells_ +
                                                node_cell_[idx[1]];
    cell_count_[cell] += 1.0;
  }
}

Field ObservationOperator::cell_average(const Field& physical) const {
  const Grid& g = *grid_;
  std::vector<double> sums(cell_count_.size(), 0.0);
  auto cell_of = [&](std::size_t flat) {
    const auto idx = g.unflatten(flat);
    return g.dim() == 1 ? static_cast<std::size_t>(node_cell_[idx[0]])
                        : static_cast<std::size_t>(node_cell_[idx[0]]) * cells_ +
                              node_cell_[idx[1]];
  };
  for (std::size_t flat = 0; flat < g.size(); ++flat) sums[cell_of(flat)] += physical[flat];
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (cell_count_[c] > 0.0) sums[c] /= cell_count_[c];
  }
  Field out(grid_, Repr::physical);
  for (std::size_t flat = 0; flat < g.size(); ++flat) out[flat] = sums[cell_of(flat)];
  return out;
}

Field ObservationOperator::observe(const Field& f) const {
  if (!f.grid().same_as(*grid_)) throw UsageError("observed field is not on the observer's grid");
  if (kind_ == ObserverKind::low_pass) {
    Field modal = to_modal(f);
    for (std::size_t k = 0; k < modal.size(); ++k) {
      if (!observed_[k]) modal[k] = 0.0;
    }
    return f.repr() == Repr::modal ? modal : inverse_transform(modal);
  }
  Field avg = cell_average(to_physical(f));
  return f.repr() == Repr::physical ? avg : forward_transform(avg);
}

ObservationOperator make_observer(ObserverKind kind, double delta, GridPtr grid) {
  return ObservationOperator(kind, delta, std::move(grid));
}

double interp_ratio(const ObservationOperator& op, const Field& f) {
  const double h1 = sobolev_norm(f, 1.0);
  if (h1 == 0.0) return 0.0;
  const Field residual = to_modal(f) - to_modal(op.observe(f));
  return sobolev_norm(residual, 0.0) / (op.delta() * h1);
}

double estimate_interp_constant(const ObservationOperator& op, int sample_count,
                                std::uint64_t seed, const RandomFieldRecipe& recipe) {
  if (sample_count < 1) throw UsageError("sample_count must be positive");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const Field f = random_smooth_field(op.grid_ptr(), rng, recipe);
    worst = std::max(worst, interp_ratio(op, f));
  }
  return worst;
}

double weak_bound_ratio(const ObservationOperator& op, const Field& f, const Field& g) {
  const Field residual = to_modal(f) - to_modal(op.observe(f));
  const Field gm = to_modal(g);
  const auto w = f.grid().weights();
  double pairing = 0.0;
  for (std::size_t k = 0; k < residual.size(); ++k) pairing += w[k] * residual[k] * gm[k];
  const double denom = op.delta() * sobolev_norm(f, 1.0) * sobolev_norm(g, 2.0);
  return denom == 0.0 ? 0.0 : std::abs(pairing) / denom;
}

namespace {

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

double threshold_decay(int dim) { return 1.0 + 0.5 * dim; }

double smooth_decay(int dim) { return 2.0 + 0.5 * dim; }

ScalingStudy interp_scaling_study(ObserverKind kind, const GridPtr& grid,
                                  const std::vector<double>& deltas, int sample_count,
                                  std::uint64_t seed, const RandomFieldRecipe& recipe) {
  if (deltas.size() < 2) throw UsageError("scaling study needs at least two resolutions");
  if (sample_count < 1) throw UsageError("sample_count must be positive");
  ScalingStudy study;
  study.deltas = deltas;
  std::vector<ObservationOperator> ops;
  std::vector<double> log_delta;
  for (double d : deltas) {
    ops.emplace_back(kind, d, grid);
    log_delta.push_back(std::log(d));
  }
  std::vector<double> sq_sum(deltas.size(), 0.0);
  std::mt19937_64 rng(seed);
  for (int s = 0; s < sample_count; ++s) {
    const Field f = random_smooth_field(grid, rng, recipe);
    std::vector<double> log_err;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const Field residual = f - to_modal(ops[i].observe(f));
      const double err = sobolev_norm(residual, 0.0);
      sq_sum[i] += err * err;
      log_err.push_back(std::log(err));
      study.constant = std::max(study.constant, interp_ratio(ops[i], f));
    }
    study.field_slopes.push_back(least_squares_slope(log_delta, log_err));
  }
  std::vector<double> log_rms;
  for (double sq : sq_sum) {
    study.rms_errors.push_back(std::sqrt(sq / sample_count));
    log_rms.push_back(std::log(study.rms_errors.back()));
  }
  study.slope = least_squares_slope(log_delta, log_rms);
  const auto [lo, hi] = std::minmax_element(study.field_slopes.begin(), study.field_slopes.end());
  study.min_field_slope = *lo;
  study.max_field_slope = *hi;
  return study;
}

}  // namespace nudgelab
