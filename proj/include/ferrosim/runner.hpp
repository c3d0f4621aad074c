#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ferrosim/config.hpp"

namespace ferrosim::runner {

struct RunOptions {
  std::string out_dir;  // already resolved
  bool quiet = true;
};

struct RunResult {
  std::string out_dir;
  std::vector<std::string> files;  // relative to out_dir
  nlohmann::json summary;          // headline numbers, also stored in the manifest
};

// Executes one experiment and writes traces, resolved config and manifest.
RunResult run_experiment(const config::ExperimentConfig& cfg, const RunOptions& options);

// --out wins; otherwise output.directory (or the experiment id) under
// `env_root` when given, else under the working directory.
std::string resolve_out_dir(const config::ExperimentConfig& cfg, const std::string& cli_out,
                            const std::string& env_root);

struct BundledConfig {
  const char* name;
  const char* text;
};
const std::vector<BundledConfig>& bundled_configs();

// Distinct figure names (config names up to the first '_').
std::vector<std::string> figure_names();
// Configs belonging to `figure` ("all" selects every config). Empty if unknown.
std::vector<BundledConfig> configs_for_figure(const std::string& figure);

struct FiguresOptions {
  std::string out_root;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> formats;  // empty: keep each config's own
  bool quiet = true;
};

// Runs the selected catalog entries, each into out_root/<config name>, and
// writes out_root/index.json. Throws std::invalid_argument for an unknown name.
nlohmann::json run_figures(const std::string& figure, const FiguresOptions& options);

}  // namespace ferrosim::runner
