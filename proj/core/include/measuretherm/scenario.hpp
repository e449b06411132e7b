#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "measuretherm/report.hpp"

namespace measuretherm {

enum class Scenario {
  Scheme,
  Decohere,
  Poisson,
  Jarzynski,
  JarzynskiReadings,
  Regression,
  Landauer,
  FullPipeline,
};

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);
std::vector<Scenario> all_scenarios();
std::string scenario_description(Scenario s);

using ParamValue =
    std::variant<std::int64_t, double, std::string, std::vector<double>, std::vector<std::int64_t>>;

/// A validated scenario configuration: every parameter present (defaults
/// filled), every key known, every value range-checked.
struct ScenarioConfig {
  Scenario scenario = Scenario::Jarzynski;
  std::string output_path = "measuretherm-out";
  std::map<std::string, ParamValue> parameters;

  std::int64_t get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  const std::vector<double>& get_real_list(const std::string& key) const;
  const std::vector<std::int64_t>& get_int_list(const std::string& key) const;
  std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("seed")); }
};

ScenarioConfig default_config(Scenario s);

/// Parses the flat key = value configuration grammar. A `scenario = <name>`
/// line selects the scenario; an optional `[<name>]` section header must
/// match it. Unknown keys, malformed values, and out-of-range parameters are
/// rejected with line and field diagnostics.
ScenarioConfig parse_config(const std::string& text);

/// Canonical serialization; parsing it back yields an equal config.
std::string serialize_config(const ScenarioConfig& config);

/// Runs the scenario, writing its CSV set, summary and manifest under
/// config.output_path. Deterministic for a fixed seed.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// The entropy-transfer algebra checks (trace, observable bi-definition,
/// pairing, ledger constants); part of the full pipeline and the selftest.
ScenarioResult run_entropy_algebra(const std::filesystem::path& out_dir, std::uint64_t seed,
                                   int n_states);

}  // namespace measuretherm
