#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace measuretherm {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  double elapsed_seconds = 0.0;
  std::string detail;
};

/// Runs every acceptance criterion with the default desk-scale parameters.
/// Scenario artifacts land under out_dir/run1; the determinism criterion
/// replays everything into out_dir/run2 and compares the trees byte for byte.
/// Output files are timing-free, so repeated runs with the same master seed
/// are byte-identical.
std::vector<CriterionResult> run_acceptance(const std::filesystem::path& out_dir,
                                            std::uint64_t master_seed);

std::string criterion_line(const CriterionResult& result);
bool all_criteria_passed(const std::vector<CriterionResult>& results);

}  // namespace measuretherm
