#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nudgelab/field.hpp"
#include "nudgelab/random_field.hpp"

namespace nudgelab {

enum class ObserverKind { low_pass, volume_average };

std::string_view to_string(ObserverKind kind);
ObserverKind parse_observer_kind(std::string_view name);

/// Coarse measurement operator at resolution delta.
///
/// low_pass keeps modes with Euclidean integer wavenumber <= K = floor(L/delta).
/// volume_average partitions each axis into C = max(1, floor(L/delta)) cells,
/// assigns every stored node to the cell containing it and replaces nodal
/// values by the cell mean. Both are orthogonal projections in the discrete
/// L2 inner product.
class ObservationOperator {
 public:
  ObservationOperator(ObserverKind kind, double delta, GridPtr grid);

  ObserverKind kind() const noexcept { return kind_; }
  double delta() const noexcept { return delta_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  int cutoff() const noexcept { return cutoff_; }
  int cells() const noexcept { return cells_; }
  /// Diagonal in the modal basis (allows implicit nudging).
  bool diagonal() const noexcept { return kind_ == ObserverKind::low_pass; }
  /// For low_pass: 1 on observed modes.
  std::span<const unsigned char> observed_modes() const noexcept { return observed_; }

  /// I_delta f, returned in the representation of f.
  Field observe(const Field& f) const;

 private:
  Field cell_average(const Field& physical) const;

  ObserverKind kind_;
  double delta_;
  GridPtr grid_;
  int cutoff_ = 0;
  int cells_ = 0;
  std::vector<unsigned char> observed_;
  std::vector<int> node_cell_;      // per axis node -> cell
  std::vector<double> cell_count_;  // per flattened coarse cell
};

ObservationOperator make_observer(ObserverKind kind, double delta, GridPtr grid);

/// ||f - I f||_2 / (delta ||f||_{H^1}); zero for f with ||f||_{H^1} = 0.
double interp_ratio(const ObservationOperator& op, const Field& f);

/// Lower estimate of the constant C in ||f - I f||_2 <= C delta ||f||_{H^1}:
/// the largest ratio over `sample_count` seeded random fields.
double estimate_interp_constant(const ObservationOperator& op, int sample_count,
                                std::uint64_t seed = 1, const RandomFieldRecipe& recipe = {});

/// |<f - I f, g>_2| / (delta ||f||_{H^1} ||g||_{H^2}).
double weak_bound_ratio(const ObservationOperator& op, const Field& f, const Field& g);

struct ScalingStudy {
  std::vector<double> deltas;
  std::vector<double> rms_errors;  ///< ensemble RMS of ||f - I_delta f||_2 per delta
  double slope = 0.0;              ///< log-log least squares slope of rms_errors
  std::vector<double> field_slopes;
  double min_field_slope = 0.0;
  double max_field_slope = 0.0;
  double constant = 0.0;  ///< largest interp_ratio seen over all deltas
};

/// Amplitude decay exponent of fields at the H^1 threshold, where the
/// low-pass bound is sharp: |k|^-(1 + d/2).
double threshold_decay(int dim);
/// Decay exponent of the smooth sample fields used for cell averages: |k|^-(2 + d/2).
double smooth_decay(int dim);

/// Fits log ||f - I_delta f||_2 against log delta over an ensemble of fields.
ScalingStudy interp_scaling_study(ObserverKind kind, const GridPtr& grid,
                                  const std::vector<double>& deltas, int sample_count,
                                  std::uint64_t seed, const RandomFieldRecipe& recipe);

}  // namespace nudgelab
