// Acceptance suite runner: one line per criterion, exit 1 on any failure.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rentire/acceptance.hpp"
#include "rentire/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria A1..A9"};
  std::vector<std::string> only;
  std::string profile = "full";
  std::uint64_t seed = 0;
  int threads = 0;
  bool mutate = false;
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--profile", profile, "quick|full");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--threads", threads, "Worker threads, 0 = OpenMP default");
  app.add_flag("--mutate-q-index", mutate, "Inject the Q_d -> Q_{d+1} fault");
  CLI11_PARSE(app, argc, argv);

  rentire::AcceptanceOptions opt;
  try {
    opt.profile = rentire::profile_from_name(profile);
  } catch (const rentire::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  opt.seed = seed;
  opt.par.threads = threads;
  opt.q_index_mutation = mutate;
  if (only.empty()) only = rentire::criterion_ids();

  bool all = true;
  for (const auto& id : only) {
    const auto r = rentire::run_criterion(id, opt);
    std::cout << rentire::format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
