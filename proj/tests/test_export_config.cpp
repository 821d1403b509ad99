#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nudgelab/config.hpp"
#include "nudgelab/errors.hpp"
#include "nudgelab/export.hpp"

using namespace nudgelab;
namespace fs = std::filesystem;

namespace {

TrajectoryRecord tiny_record() {
  TrajectoryRecord rec;
  rec.norms = {"l2", "h1"};
  rec.times = {0.0, 0.1, 0.2};
  rec.err = {{"l2", {1.0, 0.5, 0.25}}, {"h1", {3.0, 1.5, 1.0 / 3.0}}};
  rec.ref = {{"l2", {2.0, 1.9, 1.8}}, {"h1", {4.0, 3.9, 3.8}}};
  rec.diagnostics = {{"mass", {0.0, -0.0, 1e-300}}};
  return rec;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nudgelab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const fs::path kConfigs = fs::path(NUDGELAB_SOURCE_DIR) / "configs";

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5e-17}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("trajectory csv layout") {
  CHECK(lines(trajectory_csv(TrajectoryRecord{})) == std::vector<std::string>{"time"});
  TrajectoryRecord empty = tiny_record();
  empty.times.clear();
  for (auto* m : {&empty.err, &empty.ref, &empty.diagnostics}) {
    for (auto& [k, v] : *m) v.clear();
  }
  CHECK(lines(trajectory_csv(empty)).size() == 1);
  const auto rows = lines(trajectory_csv(tiny_record()));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "time,err_l2,err_h1,ref_l2,ref_h1,diag_mass");
  CHECK(rows[2].rfind("0.1,0.5,1.5,1.9,3.9,", 0) == 0);
}

TEST_CASE("trajectory json round trip") {
  const TrajectoryRecord rec = tiny_record();
  ExportMeta meta;
  meta.config = {{"grid", {{"n", 8}}}};
  meta.seed = 7;
  const Json doc = trajectory_json(rec, meta);
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["kind"] == "trajectory");
  CHECK(doc["seed"] == 7);
  CHECK(doc["code_version"] == code_version());
  CHECK(trajectory_from_json(doc) == rec);
  CHECK(trajectory_from_json(Json::parse(doc.dump())) == rec);

  Json wrong = doc;
  wrong["schema_version"] = 99;
  CHECK_THROWS_AS(trajectory_from_json(wrong), IoError);
  Json other = doc;
  other["kind"] = "sweep";
  CHECK_THROWS_AS(trajectory_from_json(other), IoError);
}

TEST_CASE("sweep exports") {
  SweepTable table;
  table.rows.push_back({10.0, 0.125, -18.5, 0.999, true, false, ""});
  table.rows.push_back({30.0, 0.125, NAN, NAN, true, true, "blow-up"});
  const auto rows = lines(sweep_csv(table));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "mu,delta,rate,r2,feasible,blewup");
  CHECK(rows[1] == "10,0.125,-18.5,0.999,true,false");
  CHECK(rows[2] == "30,0.125,nan,nan,true,true");
  const Json doc = sweep_json(table, {});
  CHECK(doc["rows"][1]["rate"].is_null());
  CHECK(sweep_from_json(Json::parse(doc.dump())) == table);
}

TEST_CASE("export files and io errors") {
  const fs::path dir = temp_dir("export");
  const TrajectoryRecord rec = tiny_record();
  export_trajectory(rec, dir / "t.json", ExportFormat::json);
  export_trajectory(rec, dir / "t.csv", ExportFormat::csv);
  CHECK(read_trajectory_json(dir / "t.json") == rec);
  std::ifstream csv(dir / "t.csv");
  std::stringstream buf;
  buf << csv.rdbuf();
  CHECK(buf.str() == trajectory_csv(rec));
  CHECK_THROWS_AS(write_text(dir / "missing" / "x.csv", "a"), IoError);
  CHECK_THROWS_AS(read_json(dir / "nothing.json"), IoError);
  write_text(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(read_json(dir / "bad.json"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("shipped configurations parse") {
  for (const char* name : {"allen_cahn.json", "cahn_hilliard_2d.json", "nse_2d.json", "bidomain.json", "blowup.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_run_config(kConfigs / name, {}));
  }
  const RunConfig ac = load_run_config(kConfigs / "allen_cahn.json", {});
  CHECK(ac.twin.model.kind == ModelKind::allen_cahn_1d);
  CHECK(ac.twin.n == 128);
  CHECK(ac.twin.mu == 100.0);
  CHECK(ac.fit.t_burn == 0.2);
  CHECK(ac.model_given);
}

TEST_CASE("config defaults and normalized echo") {
  const RunConfig def = load_run_config(std::nullopt, {});
  CHECK_FALSE(def.model_given);
  CHECK(def.twin.model.kind == ModelKind::allen_cahn_1d);
  const Json echo = to_json(def);
  CHECK(to_json(parse_run_config(echo)) == echo);
  const RunConfig ch = load_run_config(kConfigs / "cahn_hilliard_2d.json", {});
  CHECK(to_json(parse_run_config(to_json(ch))) == to_json(ch));
  CHECK(ch.twin.model.meta.omega == ch.twin.model.params.shift);
}

TEST_CASE("config rejects unknown keys and bad values with their path") {
  auto key_of = [](const std::vector<std::string>& sets) {
    try {
      load_run_config(std::nullopt, sets);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of({"nudge.mu_typo=3"}) == "nudge.mu_typo");
  CHECK(key_of({"colour=1"}) == "colour");
  CHECK(key_of({"model.meta.bogus=1"}) == "model.meta.bogus");
  CHECK(key_of({"nudge.mu=-1"}) == "nudge.mu");
  CHECK(key_of({"nudge.mu=\"ten\""}) == "nudge.mu");
  CHECK(key_of({"grid.n=12.5"}) == "grid.n");
  CHECK(key_of({"grid.bc=periodic"}) == "grid.bc");
  CHECK(key_of({"scheme.kind=rk4"}) == "scheme.kind");
  CHECK(key_of({"nudge.observer=point"}) == "nudge.observer");
  CHECK(key_of({"record.norms=[\"l2\"]", "fit.norm=h1"}) == "fit.norm");
  CHECK(key_of({"model.name=cahn_hilliard_1d", "model.shift=-1"}) == "model.shift");
  CHECK(key_of({"nudge.delta=5"}) == "nudge.delta");
  CHECK(key_of({"sweep.mu=[]"}) == "sweep.mu");
  CHECK(key_of({"noequals"}) == "--set");
}

TEST_CASE("overrides and seed") {
  const RunConfig cfg = load_run_config(kConfigs / "allen_cahn.json",
                                        {"nudge.mu=30", "nudge.observer=volume_average", "sweep.mu=[1,2]"}, 42);
  CHECK(cfg.twin.mu == 30.0);
  CHECK(cfg.twin.observer == ObserverKind::volume_average);
  CHECK(cfg.sweep_mu == std::vector<double>{1.0, 2.0});
  CHECK(cfg.twin.u0_seed == 42);
  Json doc = Json::object();
  apply_override(doc, "a.b.c=true");
  CHECK(doc["a"]["b"]["c"] == true);
  apply_override(doc, "a.name=hello world");
  CHECK(doc["a"]["name"] == "hello world");
  CHECK_THROWS_AS(apply_override(doc, "a.b.c.d=1"), ConfigError);
}
