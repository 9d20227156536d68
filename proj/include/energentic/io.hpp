#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "environment.hpp"
#include "errors.hpp"
#include "metrics.hpp"
#include "policies.hpp"
#include "simulation.hpp"

namespace energentic {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------

/// Nine significant digits, the precision of every CSV and report float.
inline std::string format_float(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// `v` rounded to nine significant digits, for JSON reports.
inline double round9(double v) { return std::strtod(format_float(v).c_str(), nullptr); }

// ---------------------------------------------------------------------------
// Strict JSON reading
// ---------------------------------------------------------------------------

namespace detail {

/// Reads fields of one JSON object, tracking which keys were consumed so
/// that leftovers can be rejected by name.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(key_path(key), "missing required key");
    seen_.insert(key);
    return j_.at(key);
  }

  template <typename T>
  T get(const std::string& key) {
    const json& v = at(key);
    return convert<T>(v, key_path(key));
  }

  template <typename T>
  void get_to(const std::string& key, T& out) {
    if (has(key)) out = get<T>(key);
  }

  std::optional<StrictObject> child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return StrictObject(at(key), key_path(key));
  }

  /// Throws ConfigError naming the first key that was never read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(key_path(it.key()), "unknown key");
    }
  }

  template <typename T>
  static T convert(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(path, "expected a number");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (v.is_number_unsigned()) return v.get<std::uint64_t>();
      if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
      throw ConfigError(path, "expected an unsigned integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
      const auto raw = v.get<std::int64_t>();
      if (raw < std::numeric_limits<T>::min() || raw > std::numeric_limits<T>::max())
        throw ConfigError(path, "integer out of range");
      return static_cast<T>(raw);
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path, "expected a string");
      return v.get<std::string>();
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline FieldTerm parse_term(StrictObject& o) {
  const auto type = o.get<std::string>("type");
  if (type == "constant") return ConstantField{o.get<double>("value")};
  if (type == "linear_gradient") {
    LinearGradient g;
    o.get_to("base", g.base);
    o.get_to("dx", g.dx);
    o.get_to("dy", g.dy);
    return g;
  }
  if (type == "gaussian_hotspots") {
    GaussianHotspots g;
    const json& list = o.at("hotspots");
    const std::string lp = o.key_path("hotspots");
    if (!list.is_array()) throw ConfigError(lp, "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      StrictObject h(list[i], lp + "[" + std::to_string(i) + "]");
      Hotspot spot;
      spot.cx = h.get<double>("x");
      spot.cy = h.get<double>("y");
      h.get_to("amplitude", spot.amplitude);
      h.get_to("sigma", spot.sigma);
      h.finish();
      g.hotspots.push_back(spot);
    }
    return g;
  }
  throw ConfigError(o.key_path("type"), "unknown field type '" + type + "'");
}

inline Temporal parse_temporal(StrictObject& o) {
  const auto type = o.get<std::string>("type");
  if (type == "static") return StaticTemporal{};
  if (type == "sinusoidal") {
    SinusoidalTemporal s;
    s.period = o.get<double>("period");
    s.amplitude_fraction = o.get<double>("amplitude_fraction");
    return s;
  }
  throw ConfigError(o.key_path("type"), "unknown temporal type '" + type + "'");
}

/// Either a single term object or {"terms": [...]}, each with an optional
/// "temporal" entry.
inline FieldSpec parse_field(StrictObject o) {
  FieldSpec f;
  if (o.has("terms")) {
    const json& list = o.at("terms");
    const std::string lp = o.key_path("terms");
    if (!list.is_array()) throw ConfigError(lp, "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      StrictObject t(list[i], lp + "[" + std::to_string(i) + "]");
      f.terms.push_back(parse_term(t));
      t.finish();
    }
  } else {
    f.terms.push_back(parse_term(o));
  }
  if (auto t = o.child("temporal")) {
    f.temporal = parse_temporal(*t);
    t->finish();
  }
  o.finish();
  return f;
}

inline ActionTable parse_action_table(StrictObject o, ActionTable defaults) {
  o.get_to("idle", defaults.idle);
  o.get_to("compute", defaults.compute);
  o.get_to("move", defaults.move);
  o.finish();
  return defaults;
}

}  // namespace detail

/// Strict parse of an environment object. Unknown keys are rejected by name.
inline EnvironmentSpec parse_environment(const json& j, const std::string& path = "environment") {
  detail::StrictObject o(j, path);
  EnvironmentSpec s;
  o.get_to("width", s.width);
  o.get_to("height", s.height);
  if (auto f = o.child("harvest_field")) s.harvest_field = detail::parse_field(*f);
  if (auto f = o.child("dissipation_field")) s.dissipation_field = detail::parse_field(*f);
  o.get_to("eta", s.eta);
  o.get_to("alpha", s.alpha);
  o.get_to("beta", s.beta);
  o.get_to("t_crit", s.t_crit);
  o.get_to("t_ambient", s.t_ambient);
  o.get_to("energy_cap", s.energy_cap);
  if (auto t = o.child("action_costs")) s.action_costs = detail::parse_action_table(*t, s.action_costs);
  if (auto t = o.child("action_heat")) s.action_heat = detail::parse_action_table(*t, s.action_heat);
  if (auto t = o.child("gain_factors")) s.gain_factors = detail::parse_action_table(*t, s.gain_factors);
  o.get_to("max_steps", s.max_steps);
  o.finish();
  validate(s);
  return s;
}

namespace detail {

inline json term_to_json(const FieldTerm& term) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantField>) {
          return {{"type", "constant"}, {"value", v.value}};
        } else if constexpr (std::is_same_v<T, GaussianHotspots>) {
          json list = json::array();
          for (const auto& h : v.hotspots)
            list.push_back({{"x", h.cx}, {"y", h.cy}, {"amplitude", h.amplitude}, {"sigma", h.sigma}});
          return {{"type", "gaussian_hotspots"}, {"hotspots", list}};
        } else {
          return {{"type", "linear_gradient"}, {"base", v.base}, {"dx", v.dx}, {"dy", v.dy}};
        }
      },
      term);
}

inline json field_to_json(const FieldSpec& f) {
  json terms = json::array();
  for (const auto& t : f.terms) terms.push_back(term_to_json(t));
  json temporal;
  if (const auto* s = std::get_if<SinusoidalTemporal>(&f.temporal)) {
    temporal = {{"type", "sinusoidal"}, {"period", s->period},
                {"amplitude_fraction", s->amplitude_fraction}};
  } else {
    temporal = {{"type", "static"}};
  }
  return {{"terms", terms}, {"temporal", temporal}};
}

inline json table_to_json(const ActionTable& t) {
  return {{"idle", t.idle}, {"compute", t.compute}, {"move", t.move}};
}

}  // namespace detail

inline json environment_to_json(const EnvironmentSpec& s) {
  return {{"width", s.width},
          {"height", s.height},
          {"harvest_field", detail::field_to_json(s.harvest_field)},
          {"dissipation_field", detail::field_to_json(s.dissipation_field)},
          {"eta", s.eta},
          {"alpha", s.alpha},
          {"beta", s.beta},
          {"t_crit", s.t_crit},
          {"t_ambient", s.t_ambient},
          {"energy_cap", s.energy_cap},
          {"action_costs", detail::table_to_json(s.action_costs)},
          {"action_heat", detail::table_to_json(s.action_heat)},
          {"gain_factors", detail::table_to_json(s.gain_factors)},
          {"max_steps", s.max_steps}};
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

enum class PolicyKind { fixed_compute, greedy_harvest, q_learning };

struct PolicySelector {
  PolicyKind kind = PolicyKind::fixed_compute;
  std::string table_path;  // q_learning only
  double epsilon = 0.0;
};

struct AxisRange {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
};

struct SweepRanges {
  AxisRange e0;
  AxisRange t0;
};

struct RunConfig {
  EnvironmentSpec environment;
  PolicySelector policy;
  RewardSpec reward;
  Forecaster forecaster = RateExtrapolation{};
  InitialState init;
  ModeThresholds modes;
  TrainingConfig training;
  std::optional<SweepRanges> sweep;
  std::optional<std::string> compare_table;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
};

inline std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::fixed_compute:
      return "fixed_compute";
    case PolicyKind::greedy_harvest:
      return "greedy_harvest";
    case PolicyKind::q_learning:
      return "q_learning";
  }
  return "fixed_compute";
}

namespace detail {

inline AxisRange parse_range(StrictObject o) {
  AxisRange r;
  r.min = o.get<double>("min");
  r.max = o.get<double>("max");
  r.count = o.get<int>("count");
  o.finish();
  return r;
}

}  // namespace detail

/// "min:max:count", the command-line form of an axis range.
inline AxisRange parse_range_spec(const std::string& text, const std::string& key) {
  AxisRange r;
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) ||
      in.peek() != EOF)
    throw ConfigError(key, "expected min:max:count, got '" + text + "'");
  try {
    std::size_t pa = 0, pb = 0, pc = 0;
    r.min = std::stod(a, &pa);
    r.max = std::stod(b, &pb);
    r.count = std::stoi(c, &pc);
    if (pa != a.size() || pb != b.size() || pc != c.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected min:max:count, got '" + text + "'");
  }
  linspace(r.min, r.max, r.count, key);
  return r;
}

/// Strict parse of a whole run configuration document.
inline RunConfig parse_run_config(const json& j) {
  detail::StrictObject root(j, "");
  RunConfig c;
  if (root.has("environment")) c.environment = parse_environment(root.at("environment"));

  if (auto p = root.child("policy")) {
    const auto type = p->get<std::string>("type");
    if (type == "fixed_compute") {
      c.policy.kind = PolicyKind::fixed_compute;
    } else if (type == "greedy_harvest") {
      c.policy.kind = PolicyKind::greedy_harvest;
    } else if (type == "q_learning") {
      c.policy.kind = PolicyKind::q_learning;
      p->get_to("table", c.policy.table_path);
      p->get_to("epsilon", c.policy.epsilon);
      if (!(c.policy.epsilon >= 0.0 && c.policy.epsilon <= 1.0))
        throw ConfigError("policy.epsilon", "must be in [0,1]");
    } else {
      throw ConfigError("policy.type", "unknown policy '" + type + "'");
    }
    p->finish();
  }

  if (auto r = root.child("reward")) {
    r->get_to("alive_bonus", c.reward.alive_bonus);
    r->get_to("compute_bonus", c.reward.compute_bonus);
    r->get_to("death_penalty", c.reward.death_penalty);
    r->finish();
    validate(c.reward);
  }

  if (auto f = root.child("forecaster")) {
    const auto type = f->get<std::string>("type");
    if (type == "rate_extrapolation") {
      RateExtrapolation r;
      f->get_to("window", r.window);
      c.forecaster = r;
    } else if (type == "oracle") {
      c.forecaster = OracleForecaster{};
    } else {
      throw ConfigError("forecaster.type", "unknown forecaster '" + type + "'");
    }
    f->finish();
    validate(c.forecaster);
  }

  c.init.temperature = c.environment.t_ambient;
  if (auto i = root.child("init")) {
    i->get_to("x", c.init.x);
    i->get_to("y", c.init.y);
    i->get_to("energy", c.init.energy);
    i->get_to("temperature", c.init.temperature);
    i->finish();
  }
  validate(c.init, c.environment);

  if (auto m = root.child("modes")) {
    m->get_to("e_low", c.modes.e_low);
    m->get_to("t_high", c.modes.t_high);
    m->finish();
    validate(c.modes);
  }

  if (auto t = root.child("training")) {
    t->get_to("episodes", c.training.episodes);
    t->get_to("learning_rate", c.training.learning_rate);
    t->get_to("discount", c.training.discount);
    t->get_to("energy_bins", c.training.energy_bins);
    t->get_to("temp_bins", c.training.temp_bins);
    if (auto e = t->child("epsilon")) {
      e->get_to("initial", c.training.schedule.initial);
      e->get_to("decay", c.training.schedule.decay);
      e->get_to("min", c.training.schedule.min);
      e->finish();
    }
    t->finish();
    if (c.training.episodes < 1) throw ConfigError("training.episodes", "must be >= 1");
    validate(c.training.schedule);
    // Surfaces bin and learning-rate errors at load time.
    QTable probe(QTableLayout{c.training.energy_bins, c.training.temp_bins, 1, 1, 1.0, 0.0, 1.0,
                              c.training.learning_rate, c.training.discount});
  }
  c.training.init = c.init;

  if (auto s = root.child("sweep")) {
    SweepRanges r;
    auto e0 = s->child("e0");
    auto t0 = s->child("t0");
    if (!e0) throw ConfigError("sweep.e0", "missing required key");
    if (!t0) throw ConfigError("sweep.t0", "missing required key");
    r.e0 = detail::parse_range(*e0);
    r.t0 = detail::parse_range(*t0);
    s->finish();
    linspace(r.e0.min, r.e0.max, r.e0.count, "sweep.e0");
    linspace(r.t0.min, r.t0.max, r.t0.count, "sweep.t0");
    c.sweep = r;
  }

  if (auto cmp = root.child("compare")) {
    c.compare_table = cmp->get<std::string>("table");
    cmp->finish();
  }

  if (root.has("seed")) c.seed = root.get<std::uint64_t>("seed");
  root.get_to("output_dir", c.output_dir);
  root.finish();
  return c;
}

/// Canonical JSON form of an effective configuration; the config digest is
/// taken over its serialisation.
inline json run_config_to_json(const RunConfig& c) {
  json policy = {{"type", to_string(c.policy.kind)}};
  if (c.policy.kind == PolicyKind::q_learning) {
    policy["table"] = c.policy.table_path;
    policy["epsilon"] = c.policy.epsilon;
  }
  json forecaster;
  if (const auto* r = std::get_if<RateExtrapolation>(&c.forecaster)) {
    forecaster = {{"type", "rate_extrapolation"}, {"window", r->window}};
  } else {
    forecaster = {{"type", "oracle"}};
  }
  json j = {
      {"environment", environment_to_json(c.environment)},
      {"policy", policy},
      {"reward",
       {{"alive_bonus", c.reward.alive_bonus},
        {"compute_bonus", c.reward.compute_bonus},
        {"death_penalty", c.reward.death_penalty}}},
      {"forecaster", forecaster},
      {"init",
       {{"x", c.init.x}, {"y", c.init.y}, {"energy", c.init.energy},
        {"temperature", c.init.temperature}}},
      {"modes", {{"e_low", c.modes.e_low}, {"t_high", c.modes.t_high}}},
      {"training",
       {{"episodes", c.training.episodes},
        {"learning_rate", c.training.learning_rate},
        {"discount", c.training.discount},
        {"energy_bins", c.training.energy_bins},
        {"temp_bins", c.training.temp_bins},
        {"epsilon",
         {{"initial", c.training.schedule.initial},
          {"decay", c.training.schedule.decay},
          {"min", c.training.schedule.min}}}}},
      {"seed", c.seed},
      {"output_dir", c.output_dir},
  };
  if (c.sweep) {
    const auto range = [](const AxisRange& r) {
      return json{{"min", r.min}, {"max", r.max}, {"count", r.count}};
    };
    j["sweep"] = {{"e0", range(c.sweep->e0)}, {"t0", range(c.sweep->t0)}};
  }
  if (c.compare_table) j["compare"] = {{"table", *c.compare_table}};
  return j;
}

/// Digest of every experiment input. The output directory is left out so
/// that the same experiment written to two places has identical manifests.
inline std::string config_digest(const RunConfig& c) {
  json j = run_config_to_json(c);
  j.erase("output_dir");
  return detail::hex64(detail::fnv1a64(j.dump()));
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

/// Parse JSON text; syntax errors are configuration errors.
inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what, std::string("malformed JSON: ") + e.what());
  }
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(parse_json_text(read_text_file(path), "<config>"));
}

// ---------------------------------------------------------------------------
// Q-table documents
// ---------------------------------------------------------------------------

inline constexpr const char* kQTableFormat = "energentic-qtable-v1";

/// Sparse document: layout constants plus "energy_bin,temp_bin,cell" ->
/// six values in canonical action order. Values keep full round-trip
/// precision so that a reloaded table acts exactly like the trained one.
inline json qtable_to_json(const QTable& t) {
  const auto& l = t.layout();
  json actions = json::array();
  for (const auto& a : kAllActions) actions.push_back(to_string(a));
  json entries = json::object();
  for (const auto& k : t.nonzero_keys()) {
    const auto v = t.values(k);
    entries[std::to_string(k.energy_bin) + "," + std::to_string(k.temp_bin) + "," +
            std::to_string(k.cell)] = json(std::vector<double>(v.begin(), v.end()));
  }
  return {{"format", kQTableFormat},
          {"energy_bins", l.energy_bins},
          {"temp_bins", l.temp_bins},
          {"width", l.width},
          {"height", l.height},
          {"energy_cap", l.energy_cap},
          {"t_ambient", l.t_ambient},
          {"t_crit", l.t_crit},
          {"learning_rate", l.learning_rate},
          {"discount", l.discount},
          {"actions", actions},
          {"entries", entries}};
}

inline QTable qtable_from_json(const json& j) {
  detail::StrictObject o(j, "qtable");
  if (o.get<std::string>("format") != kQTableFormat)
    throw ConfigError("qtable.format", "unsupported table format");
  QTableLayout l;
  l.energy_bins = o.get<int>("energy_bins");
  l.temp_bins = o.get<int>("temp_bins");
  l.width = o.get<int>("width");
  l.height = o.get<int>("height");
  l.energy_cap = o.get<double>("energy_cap");
  l.t_ambient = o.get<double>("t_ambient");
  l.t_crit = o.get<double>("t_crit");
  l.learning_rate = o.get<double>("learning_rate");
  l.discount = o.get<double>("discount");
  const json& actions = o.at("actions");
  json expected = json::array();
  for (const auto& a : kAllActions) expected.push_back(to_string(a));
  if (actions != expected) throw ConfigError("qtable.actions", "unexpected action order");
  QTable t(l);
  const json& entries = o.at("entries");
  if (!entries.is_object()) throw ConfigError("qtable.entries", "expected an object");
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    const std::string path = "qtable.entries." + it.key();
    StateKey k;
    char tail = 0;
    if (std::sscanf(it.key().c_str(), "%d,%d,%d%c", &k.energy_bin, &k.temp_bin, &k.cell, &tail) !=
            3 ||
        !t.contains(k))
      throw ConfigError(path, "invalid state key");
    if (!it.value().is_array() || it.value().size() != kNumActions)
      throw ConfigError(path, "expected six action values");
    for (std::size_t a = 0; a < kNumActions; ++a)
      t.set(k, kAllActions[a], detail::StrictObject::convert<double>(it.value()[a], path));
  }
  o.finish();
  return t;
}

/// Loads a table and checks that it was trained for `env`'s grid and ranges.
inline QTable load_qtable(const std::filesystem::path& path, const EnvironmentSpec& env) {
  QTable t = qtable_from_json(parse_json_text(read_text_file(path), "qtable"));
  const auto& l = t.layout();
  if (l.width != env.width || l.height != env.height)
    throw ConfigError("policy.table", "table grid does not match environment");
  if (l.energy_cap != env.energy_cap || l.t_ambient != env.t_ambient || l.t_crit != env.t_crit)
    throw ConfigError("policy.table", "table ranges do not match environment");
  return t;
}

// ---------------------------------------------------------------------------
// Reports and tables
// ---------------------------------------------------------------------------

inline json metrics_to_json(const MetricsReport& r) {
  json euf = json::array();
  for (double v : r.euf_series) euf.push_back(round9(v));
  return {{"evs", round9(r.evs)},
          {"tri", round9(r.tri)},
          {"she", round9(r.she)},
          {"eas", round9(r.eas)},
          {"survival_horizon", r.survival_horizon ? json(*r.survival_horizon) : json(nullptr)},
          {"empirical_lifespan", r.empirical_lifespan},
          {"euf_series", euf}};
}

inline constexpr const char* kTrajectoryHeader =
    "step,x,y,energy,temperature,action,e_in,e_out,mode,forecast";

/// One row per transition, then a closing row for the terminal state with
/// action "none".
inline std::string trajectory_csv(const Trajectory& t) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const auto& s : t.steps) {
    out += std::to_string(s.step) + ',' + std::to_string(s.x) + ',' + std::to_string(s.y) + ',' +
           format_float(s.energy) + ',' + format_float(s.temperature) + ',' + to_string(s.action) +
           ',' + format_float(s.e_in) + ',' + format_float(s.e_out) + ',' + to_string(s.mode) +
           ',' + format_float(s.forecast) + '\n';
  }
  const auto& f = t.final_state;
  out += std::to_string(f.step) + ',' + std::to_string(f.x) + ',' + std::to_string(f.y) + ',' +
         format_float(f.energy) + ',' + format_float(f.temperature) + ",none,0,0," +
         to_string(Mode::dormant) + ",0\n";
  return out;
}

inline std::string heatmap_csv(const std::vector<HeatmapRow>& rows) {
  std::string out = "step,energy,temperature,viability_prefix_eas\n";
  for (const auto& r : rows) {
    out += std::to_string(r.step) + ',' + format_float(r.energy) + ',' +
           format_float(r.temperature) + ',' + format_float(r.viability) + '\n';
  }
  return out;
}

/// First row: blank corner then the e0 axis; each following row: t0 then lifespans.
inline std::string horizon_map_csv(const HorizonMap& m) {
  std::string out = "t0\\e0";
  for (double e : m.e0_axis) out += ',' + format_float(e);
  out += '\n';
  for (std::size_t i = 0; i < m.t0_axis.size(); ++i) {
    out += format_float(m.t0_axis[i]);
    for (int v : m.cells[i]) out += ',' + std::to_string(v);
    out += '\n';
  }
  return out;
}

inline std::string training_log_csv(const std::vector<TrainingLogEntry>& log) {
  std::string out = "episode,length,return,cause,epsilon\n";
  for (const auto& e : log) {
    out += std::to_string(e.episode) + ',' + std::to_string(e.length) + ',' +
           format_float(e.episode_return) + ',' + to_string(e.cause) + ',' +
           format_float(e.epsilon) + '\n';
  }
  return out;
}

/// Energy per step for each named trajectory (pre-action energies, then the
/// terminal energy); cells past a policy's termination are empty.
inline std::string energy_comparison_csv(const std::vector<std::string>& names,
                                         const std::vector<const Trajectory*>& trajs) {
  std::string out = "step";
  for (const auto& n : names) out += ',' + n;
  out += '\n';
  std::size_t rows = 0;
  for (const auto* t : trajs) rows = std::max(rows, t->steps.size() + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    out += std::to_string(i);
    for (const auto* t : trajs) {
      out += ',';
      if (i < t->steps.size()) {
        out += format_float(t->steps[i].energy);
      } else if (i == t->steps.size()) {
        out += format_float(t->final_state.energy);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace energentic
