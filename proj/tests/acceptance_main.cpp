// Acceptance suite runner: one line per criterion, nonzero exit on any
// failure. Artifacts land in a scratch directory so repeated ctest runs
// start clean.

#include <cstdio>
#include <filesystem>

#include "measuretherm/acceptance.hpp"

int main() {
  namespace fs = std::filesystem;
  const fs::path out = fs::temp_directory_path() / "measuretherm_acceptance";
  fs::remove_all(out);

  const auto results = measuretherm::run_acceptance(out, 42);
  for (const auto& r : results) {
    std::printf("%s\n", measuretherm::criterion_line(r).c_str());
  }
  const bool ok = measuretherm::all_criteria_passed(results);
  std::printf("%s\n", ok ? "acceptance pass" : "acceptance fail");
  return ok ? 0 : 1;
}
