#pragma once

#include <cstdint>
#include <random>

#include "nudgelab/field.hpp"

namespace nudgelab {

/// Random superposition of low modes: coefficient of mode k is g_k |k|^{-decay}
/// with g_k standard normal, over all modes whose per-axis wavenumbers are
/// <= max_mode (zero mode excluded). The result is rescaled to the requested
/// L2 norm.
struct RandomFieldRecipe {
  int max_mode = 0;  ///< 0 selects max(1, n/8)
  double decay = 2.0;
  double amplitude = 1.0;
};

Field random_smooth_field(const GridPtr& grid, std::mt19937_64& rng,
                          const RandomFieldRecipe& recipe = {});
Field random_smooth_field(const GridPtr& grid, std::uint64_t seed,
                          const RandomFieldRecipe& recipe = {});

}  // namespace nudgelab
