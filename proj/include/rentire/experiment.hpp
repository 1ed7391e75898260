#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rentire/dist.hpp"
#include "rentire/growth.hpp"
#include "rentire/hypercyclicity.hpp"

namespace rentire {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvariant = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
};

/// Experiment configuration. Zero / empty / absent fields select the
/// per-experiment defaults listed in the README.
struct ExperimentConfig {
  std::string experiment = "density";
  DistSpec dist;
  std::optional<TargetSpec> target;
  std::size_t n_max = 0;
  std::size_t replicates = 0;
  std::vector<double> r_grid;
  double p = kSupNorm;
  std::size_t grid_m = 0;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::string output_dir = "results";
  int threads = 0;
  std::string profile = "quick";

  /// Throws ConfigError.
  void validate() const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

const std::vector<std::string>& experiment_names();

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Unknown keys and ill-typed values raise ConfigError. A seed inside the
/// dist fragment is used only when the top level has none.
void from_json(const nlohmann::json& j, ExperimentConfig& c);

ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

struct RunOutcome {
  int exit_code = kExitOk;
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
  std::string message;
};

/// Validates, runs, then writes `<output_dir>/<experiment>-<hash>.csv` and
/// `<output_dir>/summary.json`. Nothing is written on config or numerical
/// errors. Progress and verdict lines go to `log`.
RunOutcome run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace rentire
