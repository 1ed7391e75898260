// Command-line front end for the experiment harness.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rentire/error.hpp"
#include "rentire/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Random entire functions: hypercyclicity, growth and radius experiments"};
  std::optional<std::string> experiment, config_path, output_dir, profile;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool print_config = false;

  app.add_option("--experiment", experiment, "density|probabilities|variance|growth|moments|kahane|radius|verify");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--threads", threads, "Worker threads, 0 = OpenMP default");
  app.add_option("--output-dir", output_dir, "Directory for the CSV and summary.json");
  app.add_option("--profile", profile, "Acceptance profile for verify: quick|full");
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rentire::kExitConfig;
  }

  rentire::ExperimentConfig cfg;
  try {
    if (config_path) cfg = rentire::load_config(*config_path);
    if (experiment) cfg.experiment = *experiment;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (output_dir) cfg.output_dir = *output_dir;
    if (profile) cfg.profile = *profile;
    cfg.validate();
  } catch (const rentire::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return rentire::kExitConfig;
  }

  if (print_config) {
    nlohmann::json j = cfg;
    std::cout << j.dump(2) << "\n";
    return rentire::kExitOk;
  }

  try {
    const auto out = rentire::run_experiment(cfg, std::cerr);
    if (out.exit_code == rentire::kExitOk || out.exit_code == rentire::kExitInvariant)
      std::cout << out.csv_path.string() << "\n" << out.summary_path.string() << "\n";
    std::cerr << out.message << "\n";
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return rentire::kExitNumerical;
  }
}
