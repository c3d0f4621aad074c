#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ferrosim/domains.hpp"
#include "ferrosim/electrostatics.hpp"
#include "ferrosim/instrument.hpp"

namespace ferrosim::config {

// Carries every problem found, each prefixed with the offending key path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

using ParamValue = std::variant<double, std::vector<double>, std::string, bool>;

// Protocol parameters. Types are fixed by the per-experiment schema.
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, ParamValue> values) : values_(std::move(values)) {}

  double num(const std::string& key) const;
  int integer(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  bool flag(const std::string& key) const;

  const std::map<std::string, ParamValue>& values() const { return values_; }
  std::map<std::string, ParamValue>& values() { return values_; }

 private:
  const ParamValue& at(const std::string& key) const;
  std::map<std::string, ParamValue> values_;
};

const std::vector<std::string>& experiment_names();
bool is_integer_param(std::string_view experiment, std::string_view key);
// Throws std::invalid_argument for an unknown experiment.
Params default_params(std::string_view experiment);

struct ExperimentConfig {
  std::uint64_t seed = 42;
  domains::EnsembleConfig ensemble;
  electro::DeviceStack stack;
  instrument::DeviceOptions device;
  double wakeup_cycles = 1e5;
  domains::WakeupParams wakeup;

  std::string experiment;
  std::string id;
  Params params;

  std::string out_dir;  // empty: use id
  std::vector<std::string> formats{"csv"};
};

// `overrides` are "dotted.key=yaml-value" strings applied before validation.
// Throws ConfigError listing every schema and invariant violation.
ExperimentConfig parse_config(const std::string& yaml_text,
                              const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// Empty when the file is valid.
std::vector<std::string> validate_text(const std::string& yaml_text,
                                       const std::vector<std::string>& overrides = {});

// Fully resolved YAML. The hash covers the device and experiment sections
// only, so relocating outputs keeps it stable.
std::string to_yaml(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace ferrosim::config
