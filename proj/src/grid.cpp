#include "nudgelab/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nudgelab/errors.hpp"

namespace nudgelab {

std::string_view to_string(Boundary bc) {
  switch (bc) {
    case Boundary::periodic:
      return "periodic";
    case Boundary::dirichlet:
      return "dirichlet";
    case Boundary::neumann:
      return "neumann";
  }
  return "unknown";
}

Boundary parse_boundary(std::string_view name) {
  if (name == "periodic") return Boundary::periodic;
  if (name == "dirichlet") return Boundary::dirichlet;
  if (name == "neumann") return Boundary::neumann;
  throw ConfigError("bc", "unknown boundary family '" + std::string(name) + "'");
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridPtr Grid::make(int dim, int n, Boundary bc, double extent) {
  if (dim != 1 && dim != 2) {
    throw ConfigError("dim", "must be 1 or 2, got " + std::to_string(dim));
  }
  if (n < 8 || !is_power_of_two(n)) {
    throw ConfigError("n", "must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw ConfigError("extent", "must be positive and finite");
  }
  return GridPtr(new Grid(dim, n, bc, extent));
}

GridPtr Grid::padded(int num, int den) const {
  if (num <= 0 || den <= 0 || (n_ * num) % den != 0) {
    throw UsageError("padding factor does not give an integer grid size");
  }
  return GridPtr(new Grid(dim_, n_ * num / den, bc_, extent_));
}

Grid::Grid(int dim, int n, Boundary bc, double extent)
    : dim_(dim), n_(n), bc_(bc), extent_(extent), m_(bc == Boundary::dirichlet ? n - 1 : n) {
  size_ = dim_ == 1 ? static_cast<std::size_t>(m_) : static_cast<std::size_t>(m_) * m_;
  laplacian_.resize(size_);
  weights_.resize(size_);
  radius_.resize(size_);
  nyquist_.resize(size_);
  for (std::size_t flat = 0; flat < size_; ++flat) {
    const auto idx = unflatten(flat);
    double lam = 0.0;
    double w = 1.0;
    double r2 = 0.0;
    bool nyq = false;
    for (int a = 0; a < dim_; ++a) {
      const double f = frequency(idx[a]);
      const int k = wavenumber(idx[a]);
      lam += f * f;
      w *= basis_weight(idx[a]);
      r2 += static_cast<double>(k) * k;
      nyq = nyq || is_nyquist(idx[a]);
    }
    laplacian_[flat] = lam;
    weights_[flat] = w;
    radius_[flat] = std::sqrt(r2);
    nyquist_[flat] = nyq ? 1 : 0;
  }
}

double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double Grid::domain_volume() const noexcept { return std::pow(extent_, dim_); }

double Grid::node(int i) const {
  const double h = spacing();
  switch (bc_) {
    case Boundary::periodic:
      return i * h;
    case Boundary::dirichlet:
      return (i + 1) * h;
    case Boundary::neumann:
      return (i + 0.5) * h;
  }
  return 0.0;
}

int Grid::wavenumber(int i) const {
  switch (bc_) {
    case Boundary::periodic:
      return i <= n_ / 2 ? i : n_ - i;
    case Boundary::dirichlet:
      return i + 1;
    case Boundary::neumann:
      return i;
  }
  return 0;
}

double Grid::frequency(int i) const {
  const double k = wavenumber(i);
  const double base = bc_ == Boundary::periodic ? 2.0 * std::numbers::pi : std::numbers::pi;
  return base * k / extent_;
}

double Grid::basis_weight(int i) const {
  switch (bc_) {
    case Boundary::periodic:
      return (i == 0 || i == n_ / 2) ? extent_ : 0.5 * extent_;
    case Boundary::dirichlet:
      return 0.5 * extent_;
    case Boundary::neumann:
      return i == 0 ? extent_ : 0.5 * extent_;
  }
  return 0.0;
}

bool Grid::is_nyquist(int i) const noexcept {
  return bc_ == Boundary::periodic && i == n_ / 2;
}

bool Grid::is_sine_slot(int i) const noexcept {
  return bc_ == Boundary::periodic && i > n_ / 2;
}

std::array<int, 2> Grid::unflatten(std::size_t flat) const noexcept {
  if (dim_ == 1) return {static_cast<int>(flat), 0};
  return {static_cast<int>(flat / m_), static_cast<int>(flat % m_)};
}

std::size_t Grid::flatten(int i0, int i1) const noexcept {
  if (dim_ == 1) return static_cast<std::size_t>(i0);
  return static_cast<std::size_t>(i0) * m_ + i1;
}

bool Grid::same_as(const Grid& other) const noexcept {
  return this == &other || (dim_ == other.dim_ && n_ == other.n_ && bc_ == other.bc_ &&
                            extent_ == other.extent_);
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << dim_ << "D " << to_string(bc_) << " n=" << n_;
  if (extent_ != 1.0) os << " L=" << extent_;
  return os.str();
}

}  // namespace nudgelab
