#include "measuretherm/acceptance.hpp"

#include <chrono>
#include <sstream>

#include "measuretherm/report.hpp"
#include "measuretherm/rng.hpp"
#include "measuretherm/scenario.hpp"

namespace measuretherm {

namespace fs = std::filesystem;

namespace {

struct CriterionSpec {
  int index;
  std::string name;
  Scenario scenario;
  double time_limit_s;
  bool is_entropy_segment = false;
};

std::vector<CriterionSpec> criterion_specs() {
  return {
      {1, "work_identity_sweep", Scenario::Jarzynski, 10.0},
      {2, "event_reading_identity", Scenario::JarzynskiReadings, 5.0},
      {3, "poisson_description", Scenario::Poisson, 30.0},
      {4, "superselection_decay", Scenario::Decohere, 5.0},
      {5, "entropy_transfer_algebra", Scenario::FullPipeline, 2.0, true},
      {6, "mixture_regression", Scenario::Regression, 2.0},
      {7, "erasure_identity", Scenario::Landauer, 2.0},
      {8, "scheme_statistics", Scenario::Scheme, 5.0},
  };
}

ScenarioResult run_criterion(const CriterionSpec& spec, const fs::path& run_root,
                             std::uint64_t master_seed) {
  if (spec.is_entropy_segment) {
    return run_entropy_algebra(run_root / "entropy_transfer",
                               derive_seed(master_seed, "acceptance.entropy_transfer"), 100);
  }
  ScenarioConfig config = default_config(spec.scenario);
  config.parameters["seed"] = static_cast<std::int64_t>(master_seed);
  config.output_path = (run_root / scenario_name(spec.scenario)).string();
  return run_scenario(config);
}

std::string failing_checks(const ScenarioResult& result) {
  std::string out;
  for (const CheckResult& c : result.checks) {
    if (!c.passed) {
      if (!out.empty()) out += "; ";
      out += c.id;
    }
  }
  return out;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const fs::path& out_dir, std::uint64_t master_seed) {
  using clock = std::chrono::steady_clock;
  std::vector<CriterionResult> results;

  const fs::path run1 = out_dir / "run1";
  for (const CriterionSpec& spec : criterion_specs()) {
    const auto t0 = clock::now();
    const ScenarioResult scenario_result = run_criterion(spec, run1, master_seed);
    const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();

    CriterionResult r;
    r.index = spec.index;
    r.name = spec.name;
    r.elapsed_seconds = elapsed;
    const bool checks_ok = scenario_result.all_passed();
    const bool time_ok = elapsed < spec.time_limit_s;
    r.passed = checks_ok && time_ok;
    if (!checks_ok) r.detail = failing_checks(scenario_result);
    if (!time_ok) {
      if (!r.detail.empty()) r.detail += "; ";
      r.detail += "time limit " + format_double(spec.time_limit_s) + " s exceeded";
    }
    results.push_back(std::move(r));
  }

  // Criterion 9: the whole tree replays byte-identically under the same seed.
  {
    const auto t0 = clock::now();
    const fs::path run2 = out_dir / "run2";
    for (const CriterionSpec& spec : criterion_specs()) {
      run_criterion(spec, run2, master_seed);
    }
    std::string difference;
    const bool identical = trees_identical(run1, run2, &difference);
    CriterionResult r;
    r.index = 9;
    r.name = "determinism_replay";
    r.passed = identical;
    r.elapsed_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    if (!identical) r.detail = difference;
    results.push_back(std::move(r));
  }
  return results;
}

std::string criterion_line(const CriterionResult& result) {
  std::ostringstream os;
  os << "criterion " << result.index << " " << result.name << " "
     << (result.passed ? "PASS" : "FAIL");
  char buf[32];
  std::snprintf(buf, sizeof(buf), " (%.2f s)", result.elapsed_seconds);
  os << buf;
  if (!result.detail.empty()) os << " [" << result.detail << "]";
  return os.str();
}

bool all_criteria_passed(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace measuretherm
