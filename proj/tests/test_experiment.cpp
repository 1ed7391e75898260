#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "rentire/error.hpp"
#include "rentire/experiment.hpp"

using namespace rentire;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rentire_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const char* cli = std::getenv("RENTIRE_CLI");
  REQUIRE(cli != nullptr);
  const int status = std::system((std::string(cli) + " " + args + " >/dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

ExperimentConfig tiny_radius(const fs::path& dir) {
  ExperimentConfig c;
  c.experiment = "radius";
  c.replicates = 4;
  c.n_max = 400;
  c.seed = 42;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST_CASE("config JSON round trip") {
  ExperimentConfig c;
  c.experiment = "growth";
  c.dist = DistSpec::gaussian_plus_log_pareto(0.5);
  c.target = TargetSpec{{{1.0, -2.0}, 0.5}, 2.0, 0.25};
  c.n_max = 123;
  c.replicates = 7;
  c.r_grid = {2.0, 3.5, 10.0};
  c.p = 4.0;
  c.grid_m = 64;
  c.tol = 1e-9;
  c.seed = 18446744073709551615ULL;
  c.output_dir = "out";
  c.threads = 3;
  c.profile = "full";
  const json j = c;
  CHECK(j.get<ExperimentConfig>() == c);
  ExperimentConfig d;
  CHECK(json(d).get<ExperimentConfig>() == d);
  CHECK(json(d).at("p") == "inf");
}

TEST_CASE("config parsing rules") {
  CHECK(json::parse(R"({"dist": {"family": "complex_gaussian", "seed": 5}})").get<ExperimentConfig>().seed == 5);
  CHECK(json::parse(R"({"seed": 7, "dist": {"family": "complex_gaussian", "seed": 5}})").get<ExperimentConfig>().seed == 7);
  CHECK(json::parse(R"({"p": "sup"})").get<ExperimentConfig>().p == kSupNorm);
  const auto t = json::parse(R"({"target": {"coefficients": [1, [0, 2]]}})").get<ExperimentConfig>().target;
  REQUIRE(t.has_value());
  CHECK(t->coefficients.size() == 2);
  CHECK(t->coefficients[1] == std::complex<double>(0.0, 2.0));
  CHECK_THROWS_AS(json::parse(R"({"seeed": 1})").get<ExperimentConfig>(), ConfigError);
  CHECK_THROWS_AS(json::parse(R"({"n_max": "many"})").get<ExperimentConfig>(), ConfigError);
  CHECK_THROWS_AS(json::parse(R"({"p": "max"})").get<ExperimentConfig>(), ConfigError);
  CHECK_THROWS_AS(json::parse("[1, 2]").get<ExperimentConfig>(), ConfigError);
  const auto neg = json::parse(R"({"target": {"epsilon": -1}})").get<ExperimentConfig>();
  CHECK_THROWS_AS(neg.validate(), ConfigError);
  ExperimentConfig c;
  c.experiment = "nope";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.grid_m = 24;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.experiment = "growth";
  c.r_grid = {1.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
  ExperimentConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("runs are reproducible and thread-count independent") {
  const auto dir = scratch("repro");
  auto c = tiny_radius(dir);
  std::ostringstream log;
  const auto r1 = run_experiment(c, log);
  // The verdict may be an invariant failure; the outputs are written either way.
  REQUIRE((r1.exit_code == kExitOk || r1.exit_code == kExitInvariant));
  const std::string first = slurp(r1.csv_path);
  const auto r2 = run_experiment(c, log);
  CHECK(r1.csv_path == r2.csv_path);
  CHECK(slurp(r2.csv_path) == first);

  c.threads = 1;
  const auto s1 = slurp(run_experiment(c, log).csv_path);
  c.threads = 4;
  const auto s4 = slurp(run_experiment(c, log).csv_path);
  CHECK(s1 == first);
  CHECK(s4 == first);

  const json summary = json::parse(slurp(r1.summary_path));
  CHECK(summary.at("schema") == 1);
  CHECK(summary.at("experiment") == "radius");
  CHECK(summary.at("all_pass").is_boolean());
  CHECK(summary.at("config").get<ExperimentConfig>() == c);
  fs::remove_all(dir);
}

TEST_CASE("density experiment output") {
  const auto dir = scratch("density");
  ExperimentConfig c;
  c.experiment = "density";
  c.target = TargetSpec{{0.0}, 0.5, 1.0};
  c.n_max = 2000;
  c.replicates = 2;
  c.output_dir = dir.string();
  std::ostringstream log;
  const auto r = run_experiment(c, log);
  REQUIRE((r.exit_code == kExitOk || r.exit_code == kExitInvariant));
  const std::string csv = slurp(r.csv_path);
  CHECK(csv.rfind("replicate,n,count_B,density_B,count_A,density_A\n", 0) == 0);
  const json s = json::parse(slurp(r.summary_path));
  CHECK(s.at("stats").at("pQ").get<double>() > 0.0);
  fs::remove_all(dir);
}

TEST_CASE("failures write nothing") {
  const auto dir = scratch("fail");
  std::ostringstream log;
  ExperimentConfig bad = tiny_radius(dir);
  bad.tol = 2.0;
  CHECK(run_experiment(bad, log).exit_code == kExitConfig);
  CHECK_FALSE(fs::exists(dir));

  // No growth rate exists for a series with radius of convergence zero.
  ExperimentConfig g;
  g.experiment = "growth";
  g.dist = DistSpec::divergent_log_tail();
  g.replicates = 2;
  g.r_grid = {10.0, 20.0};
  g.output_dir = dir.string();
  const auto out = run_experiment(g, log);
  CHECK(out.exit_code == kExitNumerical);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("command-line front end") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"experiment": "radius", "replicates": 3, "n_max": 300})";
  }
  const fs::path out = dir / "out";
  const int rc = run_cli("--config " + cfg.string() + " --seed 9 --output-dir " + out.string());
  CHECK((rc == kExitOk || rc == kExitInvariant));
  CHECK(fs::exists(out / "summary.json"));
  CHECK(json::parse(slurp(out / "summary.json")).at("config").at("seed") == 9);

  {
    std::ofstream f(cfg);
    f << R"({"experiment": "radius", "bogus": 1})";
  }
  CHECK(run_cli("--config " + cfg.string()) == 2);
  CHECK(run_cli("--experiment nope") == 2);
  CHECK(run_cli("--no-such-flag") == 2);
  CHECK(run_cli("--config " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("--experiment growth --print-config") == 0);
  fs::remove_all(dir);
}
