#include "nudgelab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "nudgelab/errors.hpp"

namespace nudgelab {

namespace {

enum class Direction { forward, inverse };

fftw_r2r_kind kind_for(Boundary bc, Direction dir) {
  switch (bc) {
    case Boundary::periodic:
      return dir == Direction::forward ? FFTW_R2HC : FFTW_HC2R;
    case Boundary::dirichlet:
      return FFTW_RODFT00;
    case Boundary::neumann:
      return dir == Direction::forward ? FFTW_REDFT10 : FFTW_REDFT01;
  }
  return FFTW_R2HC;
}

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once under a lock and reused.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  // Batched 1D plan over `howmany` contiguous rows of length m.
  fftw_plan get(int howmany, int m, fftw_r2r_kind kind) {
    const auto key = std::make_tuple(howmany, m, static_cast<int>(kind));
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const std::size_t size = static_cast<std::size_t>(howmany) * m;
    std::vector<double> in(size), out(size);
    fftw_plan plan = fftw_plan_many_r2r(1, &m, howmany, in.data(), nullptr, 1, m, out.data(),
                                        nullptr, 1, m, &kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

std::vector<double> axis_scale(const Grid& g, Direction dir) {
  const int m = g.axis_size();
  const int n = g.n();
  const double inv_n = 1.0 / n;
  std::vector<double> s(m);
  for (int i = 0; i < m; ++i) {
    switch (g.bc()) {
      case Boundary::periodic:
        if (dir == Direction::forward) {
          s[i] = (i == 0 || i == n / 2) ? inv_n : (i < n / 2 ? 2.0 * inv_n : -2.0 * inv_n);
        } else {
          s[i] = (i == 0 || i == n / 2) ? 1.0 : (i < n / 2 ? 0.5 : -0.5);
        }
        break;
      case Boundary::dirichlet:
        s[i] = dir == Direction::forward ? inv_n : 0.5;
        break;
      case Boundary::neumann:
        if (dir == Direction::forward) {
          s[i] = i == 0 ? 0.5 * inv_n : inv_n;
        } else {
          s[i] = i == 0 ? 1.0 : 0.5;
        }
        break;
    }
  }
  return s;
}

void apply_scale(const Grid& g, const std::vector<double>& s, std::span<double> data) {
  if (g.dim() == 1) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= s[i];
    return;
  }
  const int m = g.axis_size();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) data[static_cast<std::size_t>(i) * m + j] *= s[i] * s[j];
  }
}

void transpose(std::span<const double> in, std::span<double> out, int m) {
  constexpr int block = 32;
  for (int i0 = 0; i0 < m; i0 += block) {
    for (int j0 = 0; j0 < m; j0 += block) {
      const int i1 = std::min(m, i0 + block);
      const int j1 = std::min(m, j0 + block);
      for (int i = i0; i < i1; ++i) {
        for (int j = j0; j < j1; ++j) {
          out[static_cast<std::size_t>(j) * m + i] = in[static_cast<std::size_t>(i) * m + j];
        }
      }
    }
  }
}

// Separable transform: a batched pass along rows, a transpose, a second pass
// and a transpose back. Contiguous passes are much faster than FFTW's strided
// multi-dimensional r2r plans at these sizes.
void execute(const Grid& g, Direction dir, std::span<const double> in, std::span<double> out) {
  const int m = g.axis_size();
  const fftw_r2r_kind kind = kind_for(g.bc(), dir);
  // FFTW's r2r interface takes non-const input; out-of-place plans never write it.
  if (g.dim() == 1) {
    fftw_execute_r2r(PlanCache::instance().get(1, m, kind), const_cast<double*>(in.data()),
                     out.data());
    return;
  }
  fftw_plan plan = PlanCache::instance().get(m, m, kind);
  thread_local std::vector<double> a;
  thread_local std::vector<double> b;
  a.resize(g.size());
  b.resize(g.size());
  fftw_execute_r2r(plan, const_cast<double*>(in.data()), a.data());
  transpose(a, b, m);
  fftw_execute_r2r(plan, b.data(), a.data());
  transpose(a, out, m);
}

// Fine-grid index of a coarse modal index along one axis, or -1 if dropped.
int padded_index(const Grid& coarse, const Grid& fine, int i) {
  if (coarse.bc() != Boundary::periodic) return i;
  const int n = coarse.n();
  if (i == n / 2) return -1;
  if (i < n / 2) return i;
  return fine.n() - (n - i);
}

void require_same_basis(const Grid& a, const Grid& b) {
  if (a.dim() != b.dim() || a.bc() != b.bc() || a.extent() != b.extent()) {
    throw UsageError("grids do not share a basis");
  }
}

}  // namespace

Field forward_transform(const Field& f) {
  if (f.repr() != Repr::physical) throw UsageError("forward_transform expects a physical field");
  const Grid& g = f.grid();
  std::vector<double> out(g.size());
  execute(g, Direction::forward, f.values(), out);
  apply_scale(g, axis_scale(g, Direction::forward), out);
  return Field(f.grid_ptr(), Repr::modal, std::move(out));
}

Field inverse_transform(const Field& f) {
  if (f.repr() != Repr::modal) throw UsageError("inverse_transform expects a modal field");
  const Grid& g = f.grid();
  thread_local std::vector<double> scaled;
  scaled.assign(f.values().begin(), f.values().end());
  apply_scale(g, axis_scale(g, Direction::inverse), scaled);
  std::vector<double> out(g.size());
  execute(g, Direction::inverse, scaled, out);
  return Field(f.grid_ptr(), Repr::physical, std::move(out));
}

Field to_modal(const Field& f) { return f.repr() == Repr::modal ? f : forward_transform(f); }

Field to_physical(const Field& f) {
  return f.repr() == Repr::physical ? f : inverse_transform(f);
}

namespace {

Field periodic_first_derivative(const Field& modal, int axis) {
  const Grid& g = modal.grid();
  const int n = g.n();
  Field out(modal.grid_ptr(), Repr::modal);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    auto idx = g.unflatten(flat);
    const int i = idx[axis];
    if (i == 0 || i == n / 2) continue;
    const double w = g.frequency(i);
    if (i < n / 2) {
      idx[axis] = n - i;  // d/dx cos = -w sin
      out[g.flatten(idx[0], idx[1])] = -w * modal[flat];
    } else {
      idx[axis] = n - i;  // d/dx sin = w cos
      out[g.flatten(idx[0], idx[1])] = w * modal[flat];
    }
  }
  return out;
}

}  // namespace

Field derivative(const Field& f, int axis, int order) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) throw UsageError("derivative axis out of range");
  if (order < 0) throw UsageError("derivative order must be nonnegative");
  if (order == 0) return f;
  Field modal = to_modal(f);
  if (g.bc() == Boundary::periodic) {
    for (int p = 0; p < order; ++p) modal = periodic_first_derivative(modal, axis);
  } else {
    if (order % 2 != 0) {
      throw ParityError("odd-order derivative maps the " + std::string(to_string(g.bc())) +
                        " basis onto its paired basis");
    }
    const double sign = (order / 2) % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
      const double w = g.frequency(g.unflatten(flat)[axis]);
      modal[flat] *= sign * std::pow(w, order);
    }
  }
  return f.repr() == Repr::modal ? modal : inverse_transform(modal);
}

Field laplacian(const Field& f) {
  Field modal = to_modal(f);
  const Grid& g = f.grid();
  const auto lam = g.laplacian();
  const auto nyq = g.nyquist_mask();
  for (std::size_t k = 0; k < g.size(); ++k) modal[k] *= nyq[k] ? 0.0 : -lam[k];
  return f.repr() == Repr::modal ? modal : inverse_transform(modal);
}

double sobolev_norm(const Field& f, double s) {
  const Field modal = to_modal(f);
  const Grid& g = f.grid();
  const auto lam = g.laplacian();
  const auto w = g.weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double a = modal[k];
    if (a == 0.0) continue;
    sum += w[k] * std::pow(1.0 + lam[k], s) * a * a;
  }
  return std::sqrt(sum);
}

double nodal_l2_norm(const Field& physical) {
  if (physical.repr() != Repr::physical) throw UsageError("nodal_l2_norm expects nodal values");
  double sum = 0.0;
  for (double v : physical.values()) sum += v * v;
  return std::sqrt(sum * physical.grid().cell_volume());
}

Field pad_modal(const Field& modal, const GridPtr& fine) {
  if (modal.repr() != Repr::modal) throw UsageError("pad_modal expects a modal field");
  const Grid& g = modal.grid();
  require_same_basis(g, *fine);
  Field out(fine, Repr::modal);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto idx = g.unflatten(flat);
    const int a = padded_index(g, *fine, idx[0]);
    const int b = g.dim() == 2 ? padded_index(g, *fine, idx[1]) : 0;
    if (a < 0 || b < 0) continue;
    out[fine->flatten(a, b)] = modal[flat];
  }
  return out;
}

Field truncate_modal(const Field& fine_modal, const GridPtr& coarse) {
  if (fine_modal.repr() != Repr::modal) throw UsageError("truncate_modal expects a modal field");
  const Grid& fine = fine_modal.grid();
  require_same_basis(*coarse, fine);
  Field out(coarse, Repr::modal);
  for (std::size_t flat = 0; flat < coarse->size(); ++flat) {
    const auto idx = coarse->unflatten(flat);
    const int a = padded_index(*coarse, fine, idx[0]);
    const int b = coarse->dim() == 2 ? padded_index(*coarse, fine, idx[1]) : 0;
    if (a < 0 || b < 0) continue;
    out[flat] = fine_modal[fine.flatten(a, b)];
  }
  return out;
}

double SpectralSymbol::min_active() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (active[k]) m = std::min(m, values[k]);
  }
  return m;
}

Field SpectralSymbol::apply(const Field& modal) const {
  if (modal.repr() != Repr::modal || !modal.grid().same_as(*grid)) {
    throw UsageError("symbol applied to an incompatible field");
  }
  Field out = modal;
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = active[k] ? values[k] * modal[k] : 0.0;
  return out;
}

}  // namespace nudgelab
