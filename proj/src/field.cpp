#include "nudgelab/field.hpp"

#include <algorithm>
#include <cmath>

#include "nudgelab/errors.hpp"

namespace nudgelab {

Field::Field(GridPtr grid, Repr repr) : grid_(std::move(grid)), repr_(repr) {
  if (!grid_) throw UsageError("field requires a grid");
  values_.assign(grid_->size(), 0.0);
}

Field::Field(GridPtr grid, Repr repr, std::vector<double> values)
    : grid_(std::move(grid)), repr_(repr), values_(std::move(values)) {
  if (!grid_) throw UsageError("field requires a grid");
  if (values_.size() != grid_->size()) {
    throw UsageError("field has " + std::to_string(values_.size()) + " values, grid expects " +
                     std::to_string(grid_->size()));
  }
}

Field Field::sample(GridPtr grid, const std::function<double(double)>& f) {
  if (grid->dim() != 1) throw UsageError("1D sampler on a 2D grid");
  Field out(grid, Repr::physical);
  for (int i = 0; i < grid->axis_size(); ++i) out[i] = f(grid->node(i));
  return out;
}

Field Field::sample(GridPtr grid, const std::function<double(double, double)>& f) {
  if (grid->dim() != 2) throw UsageError("2D sampler on a 1D grid");
  Field out(grid, Repr::physical);
  const int m = grid->axis_size();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) out[grid->flatten(i, j)] = f(grid->node(i), grid->node(j));
  }
  return out;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool Field::compatible(const Field& other) const noexcept {
  return repr_ == other.repr_ && grid_->same_as(*other.grid_);
}

void Field::require_compatible(const Field& other) const {
  if (!grid_->same_as(*other.grid_)) throw UsageError("fields live on different grids");
  if (repr_ != other.repr_) throw UsageError("fields have different representations");
}

Field& Field::operator+=(const Field& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double a) noexcept {
  for (double& v : values_) v *= a;
  return *this;
}

Field& Field::axpy(double a, const Field& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * other.values_[i];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

}  // namespace nudgelab
