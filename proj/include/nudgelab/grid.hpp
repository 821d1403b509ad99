#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nudgelab {

enum class Boundary { periodic, dirichlet, neumann };

std::string_view to_string(Boundary bc);
Boundary parse_boundary(std::string_view name);

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Tensor-product grid on [0, extent]^dim paired with the eigenbasis of the
/// Laplacian for its boundary family.
///
/// Nodes and stored unknowns per axis:
///  - periodic:  x_j = j h,        j = 0..n-1   (real Fourier basis)
///  - dirichlet: x_j = j h,        j = 1..n-1   (sine basis, boundary values implicit zero)
///  - neumann:   x_j = (j + 1/2) h, j = 0..n-1  (cosine basis)
/// with h = extent / n.
///
/// Modal layout per axis (index i, coefficient multiplies phi_i):
///  - periodic:  i = 0 constant, 1 <= i < n/2 cos(2 pi i x/L), i = n/2 the Nyquist
///               cosine, i > n/2 sin(2 pi (n-i) x/L)
///  - dirichlet: sin(pi (i+1) x/L)
///  - neumann:   cos(pi i x/L)
/// Two-dimensional fields are row-major with axis 0 outermost.
class Grid {
 public:
  /// Validated factory: dim in {1,2}, n >= 8 and a power of two, extent > 0.
  static GridPtr make(int dim, int n, Boundary bc, double extent = 1.0);

  /// Same domain and basis with n * num / den points per axis. Used for
  /// zero-padded products; the padded size need not be a power of two.
  GridPtr padded(int num, int den) const;

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  Boundary bc() const noexcept { return bc_; }
  double extent() const noexcept { return extent_; }

  /// Stored unknowns per axis (n - 1 for dirichlet, n otherwise).
  int axis_size() const noexcept { return m_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return extent_ / n_; }
  double cell_volume() const noexcept;
  double domain_volume() const noexcept;

  double node(int i) const;
  int wavenumber(int i) const;
  double frequency(int i) const;
  double basis_weight(int i) const;
  bool is_nyquist(int i) const noexcept;
  /// Periodic sine slot (derivative partner of a cosine slot).
  bool is_sine_slot(int i) const noexcept;

  std::array<int, 2> unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(int i0, int i1 = 0) const noexcept;

  /// Per flattened mode: Laplacian eigenvalue, L2 weight of the basis
  /// function, and Euclidean integer wavenumber.
  std::span<const double> laplacian() const noexcept { return laplacian_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> mode_radius() const noexcept { return radius_; }
  /// True where the mode involves a periodic Nyquist index on some axis.
  std::span<const unsigned char> nyquist_mask() const noexcept { return nyquist_; }

  bool same_as(const Grid& other) const noexcept;
  std::string describe() const;

 private:
  Grid(int dim, int n, Boundary bc, double extent);

  int dim_;
  int n_;
  Boundary bc_;
  double extent_;
  int m_;
  std::size_t size_;
  std::vector<double> laplacian_;
  std::vector<double> weights_;
  std::vector<double> radius_;
  std::vector<unsigned char> nyquist_;
};

}  // namespace nudgelab
