#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nudgelab/grid.hpp"

namespace nudgelab {

enum class Repr { physical, modal };

/// Scalar unknown on a Grid, either as nodal values or as basis coefficients.
class Field {
 public:
  Field(GridPtr grid, Repr repr);
  Field(GridPtr grid, Repr repr, std::vector<double> values);

  /// Nodal samples of a function of x (1D) or (x, y) (2D).
  static Field sample(GridPtr grid, const std::function<double(double)>& f);
  static Field sample(GridPtr grid, const std::function<double(double, double)>& f);

  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Grid& grid() const noexcept { return *grid_; }
  Repr repr() const noexcept { return repr_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  bool all_finite() const noexcept;
  bool compatible(const Field& other) const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a) noexcept;
  /// this += a * other
  Field& axpy(double a, const Field& other);

 private:
  void require_compatible(const Field& other) const;

  GridPtr grid_;
  Repr repr_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);

}  // namespace nudgelab
