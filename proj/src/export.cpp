#include "nudgelab/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nudgelab/errors.hpp"

namespace nudgelab {

std::string code_version() { return NUDGELAB_VERSION; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  out += '\n';
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

double to_double(const Json& v) {
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

Json header(std::string_view kind, const ExportMeta& meta) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = kind;
  doc["code_version"] = code_version();
  doc["seed"] = meta.seed;
  doc["config"] = meta.config;
  return doc;
}

void require_kind(const Json& doc, std::string_view kind) {
  if (!doc.contains("kind") || doc["kind"] != kind) {
    throw IoError("json document is not a " + std::string(kind) + " export");
  }
  if (doc.value("schema_version", 0) != kSchemaVersion) {
    throw IoError("unsupported schema_version in " + std::string(kind) + " export");
  }
}

}  // namespace

std::string trajectory_csv(const TrajectoryRecord& rec) {
  const auto cols = rec.columns();
  std::string out;
  append_row(out, cols);
  std::vector<const std::vector<double>*> series;
  for (const auto& c : cols) series.push_back(&rec.column(c));
  std::vector<std::string> cells(cols.size());
  for (std::size_t i = 0; i < rec.size(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) cells[c] = format_double((*series[c])[i]);
    append_row(out, cells);
  }
  return out;
}

std::string sweep_csv(const SweepTable& table) {
  std::string out;
  append_row(out, {"mu", "delta", "rate", "r2", "feasible", "blewup"});
  for (const SweepRow& r : table.rows) {
    append_row(out, {format_double(r.mu), format_double(r.delta), format_double(r.rate),
                     format_double(r.r2), r.feasible ? "true" : "false",
                     r.blewup ? "true" : "false"});
  }
  return out;
}

Json trajectory_json(const TrajectoryRecord& rec, const ExportMeta& meta) {
  Json doc = header("trajectory", meta);
  const auto cols = rec.columns();
  doc["columns"] = cols;
  Json rows = Json::array();
  for (std::size_t i = 0; i < rec.size(); ++i) {
    Json row = Json::object();
    for (const auto& c : cols) row[c] = number(rec.column(c)[i]);
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

Json sweep_json(const SweepTable& table, const ExportMeta& meta) {
  Json doc = header("sweep", meta);
  doc["columns"] = {"mu", "delta", "rate", "r2", "feasible", "blewup", "error"};
  Json rows = Json::array();
  for (const SweepRow& r : table.rows) {
    Json row = Json::object();
    row["mu"] = number(r.mu);
    row["delta"] = number(r.delta);
    row["rate"] = number(r.rate);
    row["r2"] = number(r.r2);
    row["feasible"] = r.feasible;
    row["blewup"] = r.blewup;
    row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

TrajectoryRecord trajectory_from_json(const Json& doc) {
  require_kind(doc, "trajectory");
  TrajectoryRecord rec;
  const auto cols = doc.at("columns").get<std::vector<std::string>>();
  for (const auto& c : cols) {
    if (c.rfind("err_", 0) == 0) rec.norms.push_back(c.substr(4));
  }
  for (const Json& row : doc.at("rows")) {
    for (const auto& c : cols) {
      const double v = to_double(row.at(c));
      if (c == "time") {
        rec.times.push_back(v);
      } else if (c.rfind("err_", 0) == 0) {
        rec.err[c.substr(4)].push_back(v);
      } else if (c.rfind("ref_", 0) == 0) {
        rec.ref[c.substr(4)].push_back(v);
      } else if (c.rfind("diag_", 0) == 0) {
        rec.diagnostics[c.substr(5)].push_back(v);
      } else {
        throw IoError("unknown trajectory column '" + c + "'");
      }
    }
  }
  return rec;
}

SweepTable sweep_from_json(const Json& doc) {
  require_kind(doc, "sweep");
  SweepTable table;
  for (const Json& row : doc.at("rows")) {
    SweepRow r;
    r.mu = to_double(row.at("mu"));
    r.delta = to_double(row.at("delta"));
    r.rate = to_double(row.at("rate"));
    r.r2 = to_double(row.at("r2"));
    r.feasible = row.at("feasible").get<bool>();
    r.blewup = row.at("blewup").get<bool>();
    r.error = row.value("error", "");
    table.rows.push_back(std::move(r));
  }
  return table;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void export_trajectory(const TrajectoryRecord& rec, const std::filesystem::path& path,
                       ExportFormat format, const ExportMeta& meta) {
  write_text(path, format == ExportFormat::csv ? trajectory_csv(rec)
                                               : trajectory_json(rec, meta).dump(2) + "\n");
}

void export_sweep(const SweepTable& table, const std::filesystem::path& path, ExportFormat format,
                  const ExportMeta& meta) {
  write_text(path, format == ExportFormat::csv ? sweep_csv(table)
                                               : sweep_json(table, meta).dump(2) + "\n");
}

TrajectoryRecord read_trajectory_json(const std::filesystem::path& path) {
  return trajectory_from_json(read_json(path));
}

SweepTable read_sweep_json(const std::filesystem::path& path) {
  return sweep_from_json(read_json(path));
}

}  // namespace nudgelab
