#include "ferrosim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ferrosim/io.hpp"

namespace ferrosim::config {

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

using Schema = std::vector<std::pair<std::string, ParamValue>>;
using V = std::vector<double>;

struct ExperimentSchema {
  Schema params;
  std::set<std::string> integers;
};

const std::map<std::string, ExperimentSchema, std::less<>>& schemas() {
  static const std::map<std::string, ExperimentSchema, std::less<>> table = {
      {"pv-loop",
       {{{"amplitude", 3.5}, {"frequency", 5e3}, {"samples_per_period", 400.0}},
        {"samples_per_period"}}},
      {"cv-butterfly", {{{"v_range", 3.5}, {"dv", 0.05}, {"sweep_rate", 1.0}}, {}}},
      {"rv-hysteresis",
       {{{"v_min", -4.0}, {"v_max", 4.0}, {"n_steps", 160.0}, {"width", 2e-6}}, {"n_steps"}}},
      {"minor-loops",
       {{{"amplitudes", V{4.0, 3.5, 3.0, 2.5, 2.0, 1.5}}, {"step", 0.1}, {"width", 5e-6}}, {}}},
      {"pund", {{{"amplitude", 3.5}, {"frequency", 1e3}}, {}}},
      {"endurance",
       {{{"amplitude", 3.5},
         {"pund_frequency", 1e3},
         {"block_cycles", V{1e4, 9e4, 9e5}},
         {"block_frequency", V{1e3, 1e4, 1e5}},
         {"points", V{1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6}}},
        {}}},
      {"retention",
       {{{"n_states", 18.0},
         {"duration", 1500.0},
         {"interval", 5.0},
         {"reset_v", -4.0},
         {"reset_width", 1e-3},
         {"write_width", 5e-6},
         {"v_write_max", 4.0},
         {"k_sigma", 2.0}},
        {"n_states"}}},
      {"potdep-amplitude",
       {{{"v_pot_max", 3.5},
         {"v_dep_min", -3.0},
         {"step", 0.1},
         {"width", 10e-6},
         {"n_pot", 0.0},
         {"n_dep", 0.0},
         {"n_cycles", 5.0}},
        {"n_pot", "n_dep", "n_cycles"}}},
      {"potdep-width",
       {{{"v_pot", 2.0},
         {"v_dep", -2.0},
         {"w_start", 40e-9},
         {"w_end", 250e-9},
         {"n_pot", 12.0},
         {"n_dep", 12.0},
         {"n_cycles", 5.0}},
        {"n_pot", "n_dep", "n_cycles"}}},
      {"xd-curve",
       {{{"v_gs", V{1.0, 2.0, 3.0, 4.0}},
         {"n_d_min", 1e17},
         {"n_d_max", 1e21},
         {"n_points", 41.0}},
        {"n_points"}}},
      {"metrics",
       {{{"input", std::string()},
         {"n_cycles", 5.0},
         {"v_pot_max", 3.5},
         {"v_dep_min", -3.0},
         {"step", 0.1},
         {"width", 10e-6},
         {"window_lo", 0.05},
         {"window_hi", 0.95},
         {"sf_grid", 32.0},
         {"energy_v", 3.5},
         {"energy_i", 3.02e-8},
         {"energy_t", 200e-9},
         {"energy_reference", 2.1e-17}},
        {"n_cycles", "sf_grid"}}},
  };
  return table;
}

const ExperimentSchema& schema_of(std::string_view name) {
  const auto it = schemas().find(name);
  if (it == schemas().end()) {
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
  }
  return it->second;
}

// Typed reads from a YAML mapping; records problems instead of throwing and
// reports leftover keys as unknown.
class Section {
 public:
  Section(const YAML::Node& node, std::string path, std::vector<std::string>& issues)
      : node_(node), path_(std::move(path)), issues_(issues) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      issues_.push_back(path_ + ": expected a mapping");
      bad_ = true;
    }
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  YAML::Node get(const std::string& key) {
    seen_.insert(key);
    if (bad_ || !node_ || !node_.IsMap()) return YAML::Node();
    return node_[key];
  }

  void num(const std::string& key, double& out) {
    const auto n = get(key);
    if (!n || n.IsNull()) return;
    if (!n.IsScalar()) {
      issues_.push_back(key_path(key) + ": expected a number");
      return;
    }
    try {
      out = n.as<double>();
    } catch (const YAML::Exception&) {
      issues_.push_back(key_path(key) + ": expected a number, got '" + n.Scalar() + "'");
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    double x = static_cast<double>(out);
    num(key, x);
    if (x != std::floor(x) || x < 0.0 || x > 9.0e18) {
      issues_.push_back(key_path(key) + ": expected a non-negative integer");
      return;
    }
    out = static_cast<Int>(x);
  }

  void boolean(const std::string& key, bool& out) {
    const auto n = get(key);
    if (!n || n.IsNull()) return;
    try {
      out = n.as<bool>();
    } catch (const YAML::Exception&) {
      issues_.push_back(key_path(key) + ": expected true or false");
    }
  }

  void str(const std::string& key, std::string& out) {
    const auto n = get(key);
    if (!n || n.IsNull()) return;
    if (!n.IsScalar()) {
      issues_.push_back(key_path(key) + ": expected a string");
      return;
    }
    out = n.Scalar();
  }

  void finish() {
    if (bad_ || !node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) issues_.push_back(key_path(key) + ": unknown key");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
  bool bad_ = false;
};

void apply_override(YAML::Node& root, const std::string& expr, std::vector<std::string>& issues) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos || eq == 0) {
    issues.push_back("override '" + expr + "': expected key=value");
    return;
  }
  const std::string path = expr.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(expr.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    issues.push_back(path + ": unparseable override value");
    return;
  }
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  // yaml-cpp nodes are handles, so walking with fresh copies edits the tree in place.
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node next = chain.back()[parts[i]];
    if (!next || next.IsNull()) {
      chain.back()[parts[i]] = YAML::Node(YAML::NodeType::Map);
      next = chain.back()[parts[i]];
    } else if (!next.IsMap()) {
      issues.push_back(path + ": cannot descend into a non-mapping");
      return;
    }
    chain.push_back(next);
  }
  chain.back()[parts.back()] = value;
}

void read_params(const YAML::Node& node, ExperimentConfig& cfg, std::vector<std::string>& issues) {
  const auto& schema = schema_of(cfg.experiment);
  cfg.params = default_params(cfg.experiment);
  Section sec(node, "experiment.params", issues);
  for (auto& [key, value] : cfg.params.values()) {
    if (auto* d = std::get_if<double>(&value)) {
      if (schema.integers.count(key)) {
        sec.integer(key, *d);
      } else {
        sec.num(key, *d);
      }
    } else if (auto* list = std::get_if<std::vector<double>>(&value)) {
      const auto n = sec.get(key);
      if (!n || n.IsNull()) continue;
      try {
        if (n.IsSequence()) {
          *list = n.as<std::vector<double>>();
        } else {
          *list = {n.as<double>()};
        }
      } catch (const YAML::Exception&) {
        issues.push_back(sec.key_path(key) + ": expected a list of numbers");
      }
    } else if (auto* s = std::get_if<std::string>(&value)) {
      sec.str(key, *s);
    } else if (auto* b = std::get_if<bool>(&value)) {
      sec.boolean(key, *b);
    }
  }
  sec.finish();
}

void check_params(const ExperimentConfig& cfg, std::vector<std::string>& issues) {
  const auto& p = cfg.params;
  const std::string at = "experiment.params.";
  const auto positive = [&](const std::string& key) {
    if (!(p.num(key) > 0.0)) issues.push_back(at + key + ": must be positive");
  };
  const auto& e = cfg.experiment;
  if (e == "pv-loop") {
    positive("amplitude");
    positive("frequency");
    if (p.integer("samples_per_period") < 8) {
      issues.push_back(at + "samples_per_period: must be >= 8");
    }
  } else if (e == "cv-butterfly") {
    positive("v_range");
    positive("dv");
    positive("sweep_rate");
  } else if (e == "rv-hysteresis") {
    if (!(p.num("v_max") > p.num("v_min"))) issues.push_back(at + "v_max: must exceed v_min");
    if (p.integer("n_steps") < 4) issues.push_back(at + "n_steps: must be >= 4");
    positive("width");
  } else if (e == "minor-loops") {
    if (p.list("amplitudes").empty()) issues.push_back(at + "amplitudes: must not be empty");
    for (const double a : p.list("amplitudes")) {
      if (!(a > 0.0)) issues.push_back(at + "amplitudes: entries must be positive");
    }
    positive("step");
    positive("width");
  } else if (e == "pund") {
    positive("amplitude");
    positive("frequency");
  } else if (e == "endurance") {
    positive("amplitude");
    positive("pund_frequency");
    if (p.list("block_cycles").size() != p.list("block_frequency").size()) {
      issues.push_back(at + "block_frequency: must match block_cycles in length");
    }
    if (p.list("points").empty()) issues.push_back(at + "points: must not be empty");
  } else if (e == "retention") {
    if (p.integer("n_states") < 1) issues.push_back(at + "n_states: must be >= 1");
    positive("duration");
    positive("interval");
    positive("k_sigma");
  } else if (e == "potdep-amplitude") {
    if (!(p.num("v_pot_max") > 0.0)) issues.push_back(at + "v_pot_max: must be positive");
    if (!(p.num("v_dep_min") < 0.0)) issues.push_back(at + "v_dep_min: must be negative");
    if (p.num("step") < 0.0) issues.push_back(at + "step: must be >= 0");
    positive("width");
    if (p.integer("n_cycles") < 1) issues.push_back(at + "n_cycles: must be >= 1");
  } else if (e == "potdep-width") {
    positive("w_start");
    positive("w_end");
    if (p.integer("n_pot") < 1 || p.integer("n_dep") < 1) {
      issues.push_back(at + "n_pot/n_dep: must be >= 1");
    }
    if (p.integer("n_cycles") < 1) issues.push_back(at + "n_cycles: must be >= 1");
  } else if (e == "xd-curve") {
    positive("n_d_min");
    if (!(p.num("n_d_max") > p.num("n_d_min"))) {
      issues.push_back(at + "n_d_max: must exceed n_d_min");
    }
    if (p.integer("n_points") < 2) issues.push_back(at + "n_points: must be >= 2");
    for (const double v : p.list("v_gs")) {
      if (!(v >= 0.0)) issues.push_back(at + "v_gs: entries must be >= 0");
    }
  } else if (e == "metrics") {
    if (!(p.num("window_lo") >= 0.0 && p.num("window_lo") < p.num("window_hi") &&
          p.num("window_hi") <= 1.0)) {
      issues.push_back(at + "window_lo/window_hi: need 0 <= lo < hi <= 1");
    }
    if (p.integer("sf_grid") < 3) issues.push_back(at + "sf_grid: must be >= 3");
    if (p.integer("n_cycles") < 1) issues.push_back(at + "n_cycles: must be >= 1");
  }
}

void check_device(const ExperimentConfig& cfg, std::vector<std::string>& issues) {
  for (auto& v : cfg.ensemble.violations()) issues.push_back(v);
  for (auto& v : cfg.stack.violations()) issues.push_back(v);
  const auto& d = cfg.device;
  if (!(d.read_noise_sigma >= 0.0)) issues.push_back("device.noise.read_sigma: must be >= 0");
  if (!(d.scale > 0.0 && d.scale <= 1.0)) issues.push_back("device.scale: must lie in (0, 1]");
  if (!(d.t_min >= 0.0)) issues.push_back("device.pulse.t_min: must be >= 0");
  if (!(d.width_tau >= 0.0)) issues.push_back("device.pulse.width_tau: must be >= 0");
  if (!(d.read_time > 0.0)) issues.push_back("device.read_time: must be positive");
  if (!(d.retention_decay >= 0.0)) issues.push_back("device.retention_decay: must be >= 0");
  if (!(cfg.wakeup_cycles >= 0.0)) issues.push_back("device.wakeup.cycles: must be >= 0");
  if (!(cfg.wakeup.n_w > 0.0)) issues.push_back("device.wakeup.n_w: must be positive");
  if (!(cfg.wakeup.a_min >= 0.0 && cfg.wakeup.a_min <= 1.0)) {
    issues.push_back("device.wakeup.a_min: must lie in [0, 1]");
  }
}

ExperimentConfig parse_collect(const std::string& text, const std::vector<std::string>& overrides,
                               std::vector<std::string>& issues) {
  ExperimentConfig cfg;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    issues.push_back(std::string("config: YAML syntax error: ") + e.what());
    return cfg;
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) {
    issues.push_back("config: top level must be a mapping");
    return cfg;
  }
  for (const auto& o : overrides) apply_override(root, o, issues);

  Section top(root, "", issues);
  Section dev(top.get("device"), "device", issues);
  dev.integer("seed", cfg.seed);
  {
    Section s(dev.get("ensemble"), "device.ensemble", issues);
    s.integer("n_hysterons", cfg.ensemble.n_hysterons);
    s.num("mean_v_up", cfg.ensemble.mean_v_up);
    s.num("mean_v_down", cfg.ensemble.mean_v_down);
    s.num("sigma_c", cfg.ensemble.sigma_c);
    s.num("p_sat", cfg.ensemble.p_sat);
    s.finish();
  }
  {
    Section s(dev.get("stack"), "device.stack", issues);
    auto& st = cfg.stack;
    s.num("d_wox_nm", st.d_wox_nm);
    s.num("eps_wox", st.eps_wox);
    s.num("c_hzo_uf_cm2", st.c_hzo_uf_cm2);
    s.num("n_d_cm3", st.n_d_cm3);
    s.num("rho_ohm_cm", st.rho_ohm_cm);
    s.num("mu_cm2_vs", st.mu_cm2_vs);
    s.num("width_um", st.width_um);
    s.num("length_um", st.length_um);
    s.num("area_cap_um2", st.area_cap_um2);
    s.num("r_max_ohm", st.r_max_ohm);
    s.finish();
  }
  {
    Section s(dev.get("noise"), "device.noise", issues);
    s.num("read_sigma", cfg.device.read_noise_sigma);
    std::string model(instrument::to_string(cfg.device.noise_model));
    s.str("model", model);
    try {
      cfg.device.noise_model = instrument::noise_model_from_string(model);
    } catch (const std::invalid_argument&) {
      issues.push_back("device.noise.model: expected ron_referenced or relative, got '" + model + "'");
    }
    s.finish();
  }
  dev.num("scale", cfg.device.scale);
  {
    Section s(dev.get("wakeup"), "device.wakeup", issues);
    s.num("cycles", cfg.wakeup_cycles);
    s.num("n_w", cfg.wakeup.n_w);
    s.num("a_min", cfg.wakeup.a_min);
    s.finish();
  }
  {
    Section s(dev.get("pulse"), "device.pulse", issues);
    s.boolean("width_rule", cfg.device.width_rule);
    s.num("t_min", cfg.device.t_min);
    s.num("width_tau", cfg.device.width_tau);
    s.finish();
  }
  dev.num("read_time", cfg.device.read_time);
  dev.num("retention_decay", cfg.device.retention_decay);
  dev.finish();
  cfg.ensemble.seed = cfg.seed;
  cfg.device.seed = cfg.seed;

  Section exp(top.get("experiment"), "experiment", issues);
  exp.str("name", cfg.experiment);
  exp.str("id", cfg.id);
  const auto params = exp.get("params");
  if (cfg.experiment.empty()) {
    issues.push_back("experiment.name: required (one of " + join(experiment_names(), ", ") + ")");
  } else if (!schemas().count(cfg.experiment)) {
    issues.push_back("experiment.name: unknown experiment '" + cfg.experiment + "' (expected one of " +
                     join(experiment_names(), ", ") + ")");
  } else {
    read_params(params, cfg, issues);
    check_params(cfg, issues);
  }
  if (cfg.id.empty()) cfg.id = cfg.experiment;
  exp.finish();

  Section out(top.get("output"), "output", issues);
  out.str("directory", cfg.out_dir);
  if (const auto f = out.get("formats"); f && !f.IsNull()) {
    cfg.formats.clear();
    if (f.IsScalar()) {
      cfg.formats.push_back(f.Scalar());
    } else if (f.IsSequence()) {
      for (const auto& x : f) cfg.formats.push_back(x.as<std::string>());
    } else {
      issues.push_back("output.formats: expected a list");
    }
    for (const auto& name : cfg.formats) {
      if (name != "csv" && name != "json" && name != "svg") {
        issues.push_back("output.formats: unknown format '" + name + "' (csv, json, svg)");
      }
    }
  }
  out.finish();
  top.finish();

  check_device(cfg, issues);
  return cfg;
}

void emit_number(YAML::Emitter& e, double x) { e << io::format_double(x); }

void emit_device(YAML::Emitter& e, const ExperimentConfig& c) {
  e << YAML::Key << "device" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "seed" << YAML::Value << c.seed;
  e << YAML::Key << "ensemble" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_hysterons" << YAML::Value << c.ensemble.n_hysterons;
  e << YAML::Key << "mean_v_up" << YAML::Value;
  emit_number(e, c.ensemble.mean_v_up);
  e << YAML::Key << "mean_v_down" << YAML::Value;
  emit_number(e, c.ensemble.mean_v_down);
  e << YAML::Key << "sigma_c" << YAML::Value;
  emit_number(e, c.ensemble.sigma_c);
  e << YAML::Key << "p_sat" << YAML::Value;
  emit_number(e, c.ensemble.p_sat);
  e << YAML::EndMap;

  const auto& s = c.stack;
  e << YAML::Key << "stack" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : std::vector<std::pair<const char*, double>>{
           {"d_wox_nm", s.d_wox_nm},
           {"eps_wox", s.eps_wox},
           {"c_hzo_uf_cm2", s.c_hzo_uf_cm2},
           {"n_d_cm3", s.n_d_cm3},
           {"rho_ohm_cm", s.rho_ohm_cm},
           {"mu_cm2_vs", s.mu_cm2_vs},
           {"width_um", s.width_um},
           {"length_um", s.length_um},
           {"area_cap_um2", s.area_cap_um2},
           {"r_max_ohm", s.r_max_ohm}}) {
    e << YAML::Key << k << YAML::Value;
    emit_number(e, v);
  }
  e << YAML::EndMap;

  e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "read_sigma" << YAML::Value;
  emit_number(e, c.device.read_noise_sigma);
  e << YAML::Key << "model" << YAML::Value << std::string(instrument::to_string(c.device.noise_model));
  e << YAML::EndMap;
  e << YAML::Key << "scale" << YAML::Value;
  emit_number(e, c.device.scale);
  e << YAML::Key << "wakeup" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "cycles" << YAML::Value;
  emit_number(e, c.wakeup_cycles);
  e << YAML::Key << "n_w" << YAML::Value;
  emit_number(e, c.wakeup.n_w);
  e << YAML::Key << "a_min" << YAML::Value;
  emit_number(e, c.wakeup.a_min);
  e << YAML::EndMap;
  e << YAML::Key << "pulse" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "width_rule" << YAML::Value << c.device.width_rule;
  e << YAML::Key << "t_min" << YAML::Value;
  emit_number(e, c.device.t_min);
  e << YAML::Key << "width_tau" << YAML::Value;
  emit_number(e, c.device.width_tau);
  e << YAML::EndMap;
  e << YAML::Key << "read_time" << YAML::Value;
  emit_number(e, c.device.read_time);
  e << YAML::Key << "retention_decay" << YAML::Value;
  emit_number(e, c.device.retention_decay);
  e << YAML::EndMap;
}

void emit_experiment(YAML::Emitter& e, const ExperimentConfig& c) {
  e << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << c.experiment;
  e << YAML::Key << "id" << YAML::Value << c.id;
  e << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
  for (const auto& [key, value] : c.params.values()) {
    e << YAML::Key << key << YAML::Value;
    if (const auto* d = std::get_if<double>(&value)) {
      emit_number(e, *d);
    } else if (const auto* list = std::get_if<std::vector<double>>(&value)) {
      e << YAML::Flow << YAML::BeginSeq;
      for (const double x : *list) emit_number(e, x);
      e << YAML::EndSeq;
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      e << YAML::DoubleQuoted << *s;
    } else {
      e << std::get<bool>(value);
    }
  }
  e << YAML::EndMap << YAML::EndMap;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join(issues, "\n")), issues_(std::move(issues)) {}

const ParamValue& Params::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("missing parameter '" + key + "'");
  return it->second;
}

double Params::num(const std::string& key) const { return std::get<double>(at(key)); }
int Params::integer(const std::string& key) const { return static_cast<int>(num(key)); }
const std::vector<double>& Params::list(const std::string& key) const {
  return std::get<std::vector<double>>(at(key));
}
const std::string& Params::str(const std::string& key) const {
  return std::get<std::string>(at(key));
}
bool Params::flag(const std::string& key) const { return std::get<bool>(at(key)); }

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& kv : schemas()) out.push_back(kv.first);
    return out;
  }();
  return names;
}

bool is_integer_param(std::string_view experiment, std::string_view key) {
  return schema_of(experiment).integers.count(std::string(key)) > 0;
}

Params default_params(std::string_view experiment) {
  std::map<std::string, ParamValue> values;
  for (const auto& [k, v] : schema_of(experiment).params) values.emplace(k, v);
  return Params(std::move(values));
}

ExperimentConfig parse_config(const std::string& yaml_text, const std::vector<std::string>& overrides) {
  std::vector<std::string> issues;
  auto cfg = parse_collect(yaml_text, overrides, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot read '" + path + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::vector<std::string> validate_text(const std::string& yaml_text,
                                       const std::vector<std::string>& overrides) {
  std::vector<std::string> issues;
  parse_collect(yaml_text, overrides, issues);
  return issues;
}

std::string to_yaml(const ExperimentConfig& cfg) {
  YAML::Emitter e;
  e << YAML::Comment("resolved configuration; reproduce with: ferrosim run --config <this file>");
  e << YAML::BeginMap;
  emit_device(e, cfg);
  emit_experiment(e, cfg);
  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "directory" << YAML::Value << YAML::DoubleQuoted << cfg.out_dir;
  e << YAML::Key << "formats" << YAML::Value << YAML::Flow << cfg.formats;
  e << YAML::EndMap << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  emit_device(e, cfg);
  emit_experiment(e, cfg);
  e << YAML::EndMap;
  return io::hex64(io::fnv1a64(e.c_str()));
}

}  // namespace ferrosim::config
