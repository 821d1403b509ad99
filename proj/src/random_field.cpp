#include "nudgelab/random_field.hpp"

#include <algorithm>
#include <cmath>

#include "nudgelab/spectral.hpp"

namespace nudgelab {

Field random_smooth_field(const GridPtr& grid, std::mt19937_64& rng,
                          const RandomFieldRecipe& recipe) {
  const Grid& g = *grid;
  const int max_mode = recipe.max_mode > 0 ? recipe.max_mode : std::max(1, g.n() / 8);
  std::normal_distribution<double> normal(0.0, 1.0);
  Field f(grid, Repr::modal);
  const auto radius = g.mode_radius();
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto idx = g.unflatten(flat);
    bool inside = true;
    for (int a = 0; a < g.dim(); ++a) inside = inside && g.wavenumber(idx[a]) <= max_mode;
    if (!inside || radius[flat] == 0.0 || g.nyquist_mask()[flat]) continue;
    f[flat] = normal(rng) * std::pow(radius[flat], -recipe.decay);
  }
  const double norm = sobolev_norm(f, 0.0);
  if (norm > 0.0) f *= recipe.amplitude / norm;
  return f;
}

Field random_smooth_field(const GridPtr& grid, std::uint64_t seed,
                          const RandomFieldRecipe& recipe) {
  std::mt19937_64 rng(seed);
  return random_smooth_field(grid, rng, recipe);
}

}  // namespace nudgelab
