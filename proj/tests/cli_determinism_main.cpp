// End-to-end determinism check against the installed binary: the selftest
// invoked twice with the same master seed must leave byte-identical output
// trees, and the CLI must honor its exit-code contract.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "measuretherm/report.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("%s: %s\n", ok ? "pass" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

int run(const std::string& command) { return std::system(command.c_str()); }

}  // namespace

int main() {
  const std::string cli = MEASURETHERM_CLI_PATH;
  const fs::path scratch = fs::temp_directory_path() / "measuretherm_cli_determinism";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  const fs::path tree_a = scratch / "selftest_a";
  const fs::path tree_b = scratch / "selftest_b";
  const std::string log_a = (scratch / "a.log").string();
  const std::string log_b = (scratch / "b.log").string();

  expect(run(cli + " selftest --seed 42 --out " + tree_a.string() + " > " + log_a) == 0,
         "first selftest exits 0");
  expect(run(cli + " selftest --seed 42 --out " + tree_b.string() + " > " + log_b) == 0,
         "second selftest exits 0");

  std::string difference;
  expect(measuretherm::trees_identical(tree_a, tree_b, &difference),
         "selftest output trees are byte-identical" +
             (difference.empty() ? "" : " (" + difference + ")"));

  // Exit-code contract: configuration errors are distinct from assertion
  // failures.
  const fs::path bad_config = scratch / "bad.cfg";
  {
    std::ofstream cfg(bad_config);
    cfg << "scenario = jarzynski\nbeta = -1\n";
  }
  const int config_error =
      run(cli + " run " + bad_config.string() + " > /dev/null 2>&1");
  expect(WIFEXITED(config_error) && WEXITSTATUS(config_error) == 2,
         "invalid configuration exits 2");

  const fs::path good_config = scratch / "good.cfg";
  {
    std::ofstream cfg(good_config);
    cfg << "scenario = regression\nsweep_instances = 10\n";
  }
  const int ok = run(cli + " run " + good_config.string() + " --out " +
                     (scratch / "reg").string() + " > /dev/null");
  expect(WIFEXITED(ok) && WEXITSTATUS(ok) == 0, "valid scenario exits 0");

  const int listed = run(cli + " list-scenarios > " + (scratch / "list.txt").string());
  expect(WIFEXITED(listed) && WEXITSTATUS(listed) == 0, "list-scenarios exits 0");
  {
    std::ifstream list(scratch / "list.txt");
    std::string content((std::istreambuf_iterator<char>(list)),
                        std::istreambuf_iterator<char>());
    expect(content.find("jarzynski_readings") != std::string::npos,
           "list-scenarios names every scenario");
  }

  std::printf("%s\n", failures == 0 ? "cli determinism pass" : "cli determinism fail");
  return failures == 0 ? 0 : 1;
}
