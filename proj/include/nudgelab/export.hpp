#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "nudgelab/harness.hpp"

namespace nudgelab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class ExportFormat { csv, json };

/// Metadata written into every json export.
struct ExportMeta {
  Json config = Json::object();
  std::uint64_t seed = 0;
};

std::string code_version();

/// Shortest round-trip decimal form; nan, inf and -inf spelled out.
std::string format_double(double x);

/// Header row plus one row per sample; header only for an empty record.
std::string trajectory_csv(const TrajectoryRecord& rec);
/// mu,delta,rate,r2,feasible,blewup
std::string sweep_csv(const SweepTable& table);

Json trajectory_json(const TrajectoryRecord& rec, const ExportMeta& meta);
Json sweep_json(const SweepTable& table, const ExportMeta& meta);

TrajectoryRecord trajectory_from_json(const Json& doc);
SweepTable sweep_from_json(const Json& doc);

/// Writes `content` to `path`; throws IoError naming the path.
void write_text(const std::filesystem::path& path, const std::string& content);
Json read_json(const std::filesystem::path& path);

void export_trajectory(const TrajectoryRecord& rec, const std::filesystem::path& path,
                       ExportFormat format, const ExportMeta& meta = {});
void export_sweep(const SweepTable& table, const std::filesystem::path& path, ExportFormat format,
                  const ExportMeta& meta = {});

TrajectoryRecord read_trajectory_json(const std::filesystem::path& path);
SweepTable read_sweep_json(const std::filesystem::path& path);

}  // namespace nudgelab
