// Command-line front end: run one experiment, validate a config, or
// regenerate the bundled figure catalog.

#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ferrosim/config.hpp"
#include "ferrosim/runner.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::string env_out_root() {
  const char* v = std::getenv("FERROSIM_OUT");
  return v ? std::string(v) : std::string();
}

void report(const ferrosim::config::ConfigError& e) {
  std::cerr << "config error:\n";
  for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
}

// A bare experiment name stands for that experiment with default parameters.
std::string config_text_for(const std::string& target) {
  namespace fs = std::filesystem;
  if (fs::exists(target)) {
    std::ifstream in(target);
    if (!in) throw ferrosim::config::ConfigError({"config: cannot read '" + target + "'"});
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  for (const auto& name : ferrosim::config::experiment_names()) {
    if (name == target) return "experiment:\n  name: " + name + "\n";
  }
  throw ferrosim::config::ConfigError(
      {"config: '" + target + "' is neither a readable file nor an experiment name"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ferrosim: FeFET synapse simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string target;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> formats;
  bool quiet = false;
  std::string input;
  std::vector<std::string> sets;

  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("target", target, "config file or experiment name");
  run->add_option("--config,-c", config_path, "experiment config (YAML)");
  run->add_option("--seed", seed, "override device.seed");
  run->add_option("--out,-o", out, "output directory");
  run->add_option("--format", formats, "output formats")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->delimiter(',');
  run->add_flag("--quiet,-q", quiet, "print nothing on success");
  run->add_option("--input", input, "potentiation/depression trace CSV for `metrics`");
  run->add_option("--set", sets, "override a config key: dotted.key=value");

  auto* validate = app.add_subcommand("validate", "check a config without running it");
  std::string validate_path;
  validate->add_option("path", validate_path, "config file");
  validate->add_option("--config,-c", config_path, "config file");
  validate->add_option("--set", sets, "override a config key: dotted.key=value");

  auto* figures = app.add_subcommand("figures", "regenerate the bundled figure catalog");
  std::string figure = "all";
  figures->add_option("name", figure, "figure name or `all`");
  figures->add_option("--seed", seed, "override device.seed for every figure");
  figures->add_option("--out,-o", out, "output root");
  figures->add_option("--format", formats, "output formats")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->delimiter(',');
  figures->add_flag("--quiet,-q", quiet, "print nothing on success");
  auto* list = figures->add_flag("--list", "list figure names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) {
      if (target.empty() && config_path.empty()) {
        throw ferrosim::config::ConfigError({"run: give a config file or experiment name"});
      }
      const std::string source = config_path.empty() ? target : config_path;
      std::vector<std::string> overrides = sets;
      if (seed) overrides.push_back("device.seed=" + std::to_string(*seed));
      if (!input.empty()) overrides.push_back("experiment.params.input=\"" + input + "\"");
      auto cfg = ferrosim::config::parse_config(config_text_for(source), overrides);
      if (!formats.empty()) cfg.formats = formats;
      const auto dir = ferrosim::runner::resolve_out_dir(cfg, out, env_out_root());
      ferrosim::runner::run_experiment(cfg, {dir, quiet});
      return 0;
    }
    if (*validate) {
      const std::string source = config_path.empty() ? validate_path : config_path;
      if (source.empty()) throw ferrosim::config::ConfigError({"validate: give a config file"});
      if (!std::filesystem::exists(source)) {
        throw ferrosim::config::ConfigError({"config: no such file '" + source + "'"});
      }
      const auto issues = ferrosim::config::validate_text(config_text_for(source), sets);
      if (!issues.empty()) throw ferrosim::config::ConfigError(issues);
      std::cout << "OK\n";
      return 0;
    }
    if (*figures) {
      if (*list) {
        for (const auto& n : ferrosim::runner::figure_names()) std::cout << n << '\n';
        return 0;
      }
      if (ferrosim::runner::configs_for_figure(figure).empty()) {
        std::cerr << "unknown figure '" << figure << "'; try `ferrosim figures --list`\n";
        return kConfigError;
      }
      ferrosim::runner::FiguresOptions opt;
      const std::string env = env_out_root();
      opt.out_root = !out.empty() ? out : (!env.empty() ? env : std::string("figures"));
      opt.seed = seed;
      opt.formats = formats;
      opt.quiet = quiet;
      ferrosim::runner::run_figures(figure, opt);
      if (!quiet) std::cout << "index: " << opt.out_root << "/index.json\n";
      return 0;
    }
  } catch (const ferrosim::config::ConfigError& e) {
    report(e);
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
