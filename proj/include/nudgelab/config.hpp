#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nudgelab/export.hpp"
#include "nudgelab/harness.hpp"

namespace nudgelab {

/// Settings of the interpolant check (observe-check subcommand).
struct ObserveCheckConfig {
  int dim = 1;
  int n = 1024;
  int samples = 100;
  std::vector<double> deltas{0.125, 0.0625, 0.03125};
  int max_mode = 256;
  std::uint64_t seed = 1;
  double tol_low_pass = 0.1;
  double tol_volume_average = 0.15;
};

/// Everything a run configuration file can set. Missing keys take defaults;
/// unknown keys are rejected with their dotted path.
struct RunConfig {
  TwinConfig twin;
  FitSettings fit;
  std::vector<double> sweep_mu{10.0, 30.0, 100.0};
  std::vector<double> sweep_delta{0.125};
  ObserveCheckConfig observe;
  bool model_given = false;  ///< the document has a "model" section
};

RunConfig parse_run_config(const Json& doc);

/// Fully resolved configuration (defaults filled in), echoed into exports.
Json to_json(const RunConfig& cfg);

/// Applies "dotted.key=value". The value is read as JSON when it parses
/// (numbers, booleans, arrays), otherwise as a string.
void apply_override(Json& doc, std::string_view assignment);

/// Reads the file (if any), applies overrides and parses. A seed, if given,
/// replaces init.seed.
RunConfig load_run_config(const std::optional<std::filesystem::path>& path,
                          const std::vector<std::string>& overrides,
                          std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace nudgelab
