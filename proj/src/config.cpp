#include "nudgelab/config.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "nudgelab/errors.hpp"

namespace nudgelab {

namespace {

// Strict reader over one JSON object: every key must be consumed.
class Section {
 public:
  Section(const Json* obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (obj_ && !obj_->is_object()) throw ConfigError(path_, "expected an object");
  }

  bool present() const { return obj_ != nullptr; }

  Section child(const std::string& key) {
    const Json* v = find(key);
    return Section(v, key_path(key));
  }

  double number(const std::string& key, double fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(key_path(key), "expected a number");
    return v->get<double>();
  }

  long long integer(const std::string& key, long long fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
    return v->get<long long>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) throw ConfigError(key_path(key), "expected a nonnegative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(key_path(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(key_path(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(key_path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const Json& e : *v) {
      if (!e.is_number()) throw ConfigError(key_path(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(key_path(key), "expected an array of strings");
    std::vector<std::string> out;
    for (const Json& e : *v) {
      if (!e.is_string()) throw ConfigError(key_path(key), "expected an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  bool has(const std::string& key) const { return obj_ && obj_->contains(key); }

  void finish() const {
    if (!obj_) return;
    for (const auto& [key, value] : obj_->items()) {
      if (!seen_.count(key)) throw ConfigError(key_path(key), "unknown key");
    }
  }

 private:
  const Json* find(const std::string& key) {
    seen_.insert(key);
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const Json* obj_;
  std::string path_;
  std::set<std::string> seen_;
};

// Re-keys errors from lower layers (which name bare fields such as "n")
// under the config section they came from.
template <class Fn>
auto keyed(const std::string& prefix, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    if (e.key().rfind(prefix, 0) == 0) throw;
    const auto dot = prefix.rfind('.');
    const std::string leaf = dot == std::string::npos ? prefix : prefix.substr(dot + 1);
    if (e.key().empty() || e.key() == leaf) throw ConfigError(prefix, e.detail());
    throw ConfigError(prefix + "." + e.key(), e.detail());
  }
}

int to_int(long long v, const std::string& key) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(key, "out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

RunConfig parse_run_config(const Json& doc) {
  Section root(&doc, "");
  RunConfig cfg;
  TwinConfig& twin = cfg.twin;

  Section model = root.child("model");
  cfg.model_given = model.present();
  const std::string name = model.string("name", "allen_cahn_1d");
  twin.model = keyed("model.name", [&] { return ModelSpec::make(parse_model_kind(name)); });
  ModelParams& p = twin.model.params;
  p.nu = model.number("nu", p.nu);
  p.shift = model.number("shift", p.shift);
  p.a = model.number("a", p.a);
  p.b = model.number("b", p.b);
  p.c = model.number("c", p.c);
  p.delta_fh = model.number("delta_fh", p.delta_fh);
  p.epsilon = model.number("epsilon", p.epsilon);
  p.a1 = model.number("a1", p.a1);
  p.a2 = model.number("a2", p.a2);
  p.nonlinear_scale = model.number("nonlinear_scale", p.nonlinear_scale);
  AssumptionMeta& meta = twin.model.meta;
  // omega tracks the parameter the model shifts by unless set explicitly.
  if (twin.model.kind == ModelKind::cahn_hilliard_1d || twin.model.kind == ModelKind::cahn_hilliard_2d) {
    meta.omega = p.shift;
  } else if (twin.model.kind == ModelKind::bidomain_fhn) {
    meta.omega = p.epsilon;
  }
  Section ms = model.child("meta");
  meta.beta = ms.number("beta", meta.beta);
  meta.rho = ms.number("rho", meta.rho);
  meta.beta_j = ms.number("beta_j", meta.beta_j);
  meta.omega = ms.number("omega", meta.omega);
  meta.vstar_order = ms.number("vstar_order", meta.vstar_order);
  meta.v_order = ms.number("v_order", meta.v_order);
  ms.finish();
  model.finish();

  Section grid = root.child("grid");
  twin.n = to_int(grid.integer("n", twin.n), "grid.n");
  twin.extent = grid.number("extent", twin.extent);
  if (grid.has("bc")) {
    twin.model.bc = keyed("grid.bc", [&] { return parse_boundary(grid.string("bc", "")); });
  }
  grid.finish();
  keyed("grid", [&] {
    Grid::make(twin.model.dim(), twin.n, twin.model.bc, twin.extent);
    return 0;
  });

  Section scheme = root.child("scheme");
  twin.scheme.scheme = parse_scheme(scheme.string("kind", std::string(to_string(twin.scheme.scheme))));
  twin.scheme.dt = scheme.number("dt", twin.scheme.dt);
  twin.scheme.t_end = scheme.number("t_end", twin.scheme.t_end);
  scheme.finish();

  Section nudge = root.child("nudge");
  twin.mu = nudge.number("mu", twin.mu);
  twin.observer = keyed("nudge.observer", [&] {
    return parse_observer_kind(nudge.string("observer", std::string(to_string(twin.observer))));
  });
  twin.delta = nudge.number("delta", twin.delta);
  nudge.finish();
  if (!(twin.delta > 0.0) || twin.delta > twin.extent) {
    throw ConfigError("nudge.delta", "must satisfy 0 < delta <= grid.extent");
  }

  Section init = root.child("init");
  twin.u0_seed = init.unsigned_integer("seed", twin.u0_seed);
  twin.v0 = parse_initial_guess(init.string("v0", std::string(to_string(twin.v0))));
  twin.v0_seed = init.unsigned_integer("v0_seed", twin.v0_seed);
  twin.recipe.amplitude = init.number("amplitude", twin.recipe.amplitude);
  twin.recipe.max_mode = to_int(init.integer("max_mode", twin.recipe.max_mode), "init.max_mode");
  twin.recipe.decay = init.number("decay", twin.recipe.decay);
  init.finish();

  Section record = root.child("record");
  twin.record_every = to_int(record.integer("every", twin.record_every), "record.every");
  std::vector<std::string> norm_names;
  for (NormKind n : twin.norms) norm_names.emplace_back(to_string(n));
  norm_names = record.strings("norms", norm_names);
  twin.norms.clear();
  for (const auto& n : norm_names) twin.norms.push_back(parse_norm(n));
  record.finish();

  Section fit = root.child("fit");
  cfg.fit.norm = fit.string("norm", cfg.fit.norm);
  cfg.fit.t_burn = fit.number("t_burn", cfg.fit.t_burn);
  cfg.fit.floor = fit.number("floor", cfg.fit.floor);
  cfg.fit.relative = fit.boolean("relative", cfg.fit.relative);
  fit.finish();
  if (std::find(norm_names.begin(), norm_names.end(), cfg.fit.norm) == norm_names.end()) {
    throw ConfigError("fit.norm", "'" + cfg.fit.norm + "' is not among record.norms");
  }

  Section sweep = root.child("sweep");
  cfg.sweep_mu = sweep.numbers("mu", cfg.sweep_mu);
  cfg.sweep_delta = sweep.numbers("delta", cfg.sweep_delta);
  sweep.finish();
  if (cfg.sweep_mu.empty()) throw ConfigError("sweep.mu", "must be nonempty");
  if (cfg.sweep_delta.empty()) throw ConfigError("sweep.delta", "must be nonempty");

  Section obs = root.child("observe");
  ObserveCheckConfig& oc = cfg.observe;
  oc.dim = to_int(obs.integer("dim", oc.dim), "observe.dim");
  oc.n = to_int(obs.integer("n", oc.n), "observe.n");
  oc.samples = to_int(obs.integer("samples", oc.samples), "observe.samples");
  oc.deltas = obs.numbers("deltas", oc.deltas);
  oc.max_mode = to_int(obs.integer("max_mode", oc.max_mode), "observe.max_mode");
  oc.seed = obs.unsigned_integer("seed", oc.seed);
  oc.tol_low_pass = obs.number("tol_low_pass", oc.tol_low_pass);
  oc.tol_volume_average = obs.number("tol_volume_average", oc.tol_volume_average);
  obs.finish();
  if (oc.samples < 1) throw ConfigError("observe.samples", "must be >= 1");
  if (oc.deltas.size() < 2) throw ConfigError("observe.deltas", "need at least two values");
  keyed("observe", [&] {
    Grid::make(oc.dim, oc.n, Boundary::periodic);
    return 0;
  });

  root.finish();
  twin.validate();
  return cfg;
}

Json to_json(const RunConfig& cfg) {
  const TwinConfig& t = cfg.twin;
  const ModelParams& p = t.model.params;
  const AssumptionMeta& m = t.model.meta;
  Json doc;
  doc["model"] = {{"name", to_string(t.model.kind)},
                  {"nu", p.nu},
                  {"shift", p.shift},
                  {"a", p.a},
                  {"b", p.b},
                  {"c", p.c},
                  {"delta_fh", p.delta_fh},
                  {"epsilon", p.epsilon},
                  {"a1", p.a1},
                  {"a2", p.a2},
                  {"nonlinear_scale", p.nonlinear_scale},
                  {"meta",
                   {{"beta", m.beta},
                    {"rho", m.rho},
                    {"beta_j", m.beta_j},
                    {"omega", m.omega},
                    {"vstar_order", m.vstar_order},
                    {"v_order", m.v_order}}}};
  doc["grid"] = {{"n", t.n}, {"bc", to_string(t.model.bc)}, {"extent", t.extent}};
  doc["scheme"] = {{"kind", to_string(t.scheme.scheme)}, {"dt", t.scheme.dt}, {"t_end", t.scheme.t_end}};
  doc["nudge"] = {{"mu", t.mu}, {"observer", to_string(t.observer)}, {"delta", t.delta}};
  doc["init"] = {{"seed", t.u0_seed},
                 {"v0", to_string(t.v0)},
                 {"v0_seed", t.v0_seed},
                 {"amplitude", t.recipe.amplitude},
                 {"max_mode", t.recipe.max_mode},
                 {"decay", t.recipe.decay}};
  Json norms = Json::array();
  for (NormKind n : t.norms) norms.push_back(to_string(n));
  doc["record"] = {{"every", t.record_every}, {"norms", norms}};
  doc["fit"] = {{"norm", cfg.fit.norm},
                {"t_burn", cfg.fit.t_burn},
                {"floor", cfg.fit.floor},
                {"relative", cfg.fit.relative}};
  doc["sweep"] = {{"mu", cfg.sweep_mu}, {"delta", cfg.sweep_delta}};
  const ObserveCheckConfig& o = cfg.observe;
  doc["observe"] = {{"dim", o.dim},
                    {"n", o.n},
                    {"samples", o.samples},
                    {"deltas", o.deltas},
                    {"max_mode", o.max_mode},
                    {"seed", o.seed},
                    {"tol_low_pass", o.tol_low_pass},
                    {"tol_volume_average", o.tol_volume_average}};
  return doc;
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("--set", "expected key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty path component");
    if (!node->is_object()) throw ConfigError(key, "cannot descend into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

RunConfig load_run_config(const std::optional<std::filesystem::path>& path,
                          const std::vector<std::string>& overrides,
                          std::optional<std::uint64_t> seed) {
  Json doc = Json::object();
  if (path) {
    try {
      doc = read_json(*path);
    } catch (const IoError& e) {
      throw ConfigError("--config", e.what());
    }
    if (!doc.is_object()) throw ConfigError("--config", "top level must be an object");
  }
  for (const auto& o : overrides) apply_override(doc, o);
  if (seed) apply_override(doc, "init.seed=" + std::to_string(*seed));
  return parse_run_config(doc);
}

}  // namespace nudgelab
