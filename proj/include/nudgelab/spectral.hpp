#pragma once

#include <vector>

#include "nudgelab/field.hpp"
#include "nudgelab/grid.hpp"

namespace nudgelab {

/// Physical -> modal. Throws UsageError if `f` is already modal.
Field forward_transform(const Field& f);
/// Modal -> physical. Throws UsageError if `f` is already physical.
Field inverse_transform(const Field& f);

Field to_modal(const Field& f);
Field to_physical(const Field& f);

/// Spectral derivative of the band-limited interpolant, returned in the
/// representation of the input. Periodic Nyquist modes differentiate to zero.
/// Odd orders on sine/cosine bases throw ParityError.
Field derivative(const Field& f, int axis, int order);

/// Laplacian (sum of second derivatives over all axes).
Field laplacian(const Field& f);

/// ( sum_k w_k (1 + lambda_k)^s |f_k|^2 )^{1/2}, lambda_k the grid Laplacian
/// symbol and w_k the basis weights. s = 0 is the L2 norm.
double sobolev_norm(const Field& f, double s);

/// Quadrature L2 norm of nodal values, sqrt(h^d sum f_j^2).
double nodal_l2_norm(const Field& physical);

/// Copies the coefficients of `modal` into the layout of a finer grid with
/// the same basis, zero-filling the new modes and dropping periodic Nyquist
/// content.
Field pad_modal(const Field& modal, const GridPtr& fine);
/// Inverse of pad_modal: keeps the coarse modes, zeroes coarse periodic Nyquist.
Field truncate_modal(const Field& fine_modal, const GridPtr& coarse);

/// Per-mode real multiplier in a Grid's modal layout. Inactive modes are
/// constrained to zero (e.g. the mean of a vorticity field).
struct SpectralSymbol {
  GridPtr grid;
  std::vector<double> values;
  std::vector<unsigned char> active;

  double min_active() const;
  /// Multiply a modal field mode-by-mode.
  Field apply(const Field& modal) const;
};

}  // namespace nudgelab
