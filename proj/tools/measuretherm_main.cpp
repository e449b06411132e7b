#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "measuretherm/acceptance.hpp"
#include "measuretherm/errors.hpp"
#include "measuretherm/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertionFailure = 1;
constexpr int kExitConfigurationError = 2;

bool verbose_logging() {
  const char* env = std::getenv("MEASURETHERM_LOG");
  return env != nullptr && std::string(env) != "quiet";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw measuretherm::ConfigurationError("cannot read config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_command(const std::string& config_path, long long seed_override, bool seed_given,
                const std::string& out_override) {
  using namespace measuretherm;
  ScenarioConfig config = parse_config(read_file(config_path));
  if (seed_given) config.parameters["seed"] = static_cast<std::int64_t>(seed_override);
  if (!out_override.empty()) config.output_path = out_override;

  if (verbose_logging()) {
    std::cerr << "running scenario " << scenario_name(config.scenario) << " into "
              << config.output_path << "\n";
  }
  const ScenarioResult result = run_scenario(config);
  for (const CheckResult& c : result.checks) {
    std::cout << "check " << c.id << " " << (c.passed ? "pass" : "fail") << "\n";
  }
  std::cout << "scenario " << result.scenario << " "
            << (result.all_passed() ? "pass" : "fail") << "\n";
  return result.all_passed() ? kExitPass : kExitAssertionFailure;
}

int selftest_command(long long seed, const std::string& out_dir) {
  using namespace measuretherm;
  const auto results = run_acceptance(out_dir, static_cast<std::uint64_t>(seed));
  for (const CriterionResult& r : results) std::cout << criterion_line(r) << "\n";
  std::cout << (all_criteria_passed(results) ? "selftest pass" : "selftest fail") << "\n";
  return all_criteria_passed(results) ? kExitPass : kExitAssertionFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"measuretherm: measurement-thermodynamics simulations"};
  app.require_subcommand(1);

  std::string config_path;
  long long seed = 42;
  std::string out_dir;

  CLI::App* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("config", config_path, "path to the scenario config")->required();
  CLI::Option* run_seed = run->add_option("--seed", seed, "master seed override");
  run->add_option("--out", out_dir, "output directory override");

  CLI::App* list = app.add_subcommand("list-scenarios", "list available scenarios");

  CLI::App* selftest = app.add_subcommand("selftest", "run the full acceptance suite");
  selftest->add_option("--seed", seed, "master seed");
  std::string selftest_out = "measuretherm-selftest";
  selftest->add_option("--out", selftest_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfigurationError;
  }

  try {
    if (run->parsed()) {
      return run_command(config_path, seed, run_seed->count() > 0, out_dir);
    }
    if (list->parsed()) {
      for (measuretherm::Scenario s : measuretherm::all_scenarios()) {
        std::cout << measuretherm::scenario_name(s) << ": "
                  << measuretherm::scenario_description(s) << "\n";
      }
      return kExitPass;
    }
    if (selftest->parsed()) {
      return selftest_command(seed, selftest_out);
    }
  } catch (const measuretherm::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigurationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertionFailure;
  }
  return kExitConfigurationError;
}
