#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "measuretherm/operators.hpp"
#include "measuretherm/rng.hpp"

namespace measuretherm {

/// Parameters of the four-step selective measurement on S0 (x) A (x) M:
/// a superposition over eigenvalues x_n with amplitudes c_n, a reference
/// apparatus state, and a pointer space large enough to keep the shifted
/// pointer states distinct from the ready state.
struct SchemeConfig {
  std::vector<Complex> coefficients;
  std::vector<double> eigenvalues;
  Eigen::Index apparatus_dimension = 1;
  Eigen::Index pointer_dimension = 0;
  std::uint64_t seed = 0;
  // Coupling strengths; in the strong-coupling, rescaled-time regime the
  // finite-dimensional steps depend only on their sign, so they are carried
  // as validated metadata.
  double lambda_a = 1.0;
  double lambda_m = 1.0;

  void validate() const;
  Eigen::Index n_outcomes() const { return static_cast<Eigen::Index>(coefficients.size()); }
  Eigen::Index total_dimension() const {
    return n_outcomes() * apparatus_dimension * pointer_dimension;
  }
};

enum class SchemeStage { Initial, PostNonselective, PostEntangling, PostReading };

std::string stage_name(SchemeStage stage);

/// State of the scheme after some prefix of the four steps. Stages only
/// advance in order; the outcome is present exactly at PostReading.
struct SchemeState {
  SchemeConfig config;
  SchemeStage stage;
  DensityMatrix rho;
  std::optional<int> outcome;

  /// One line per the serialization contract: stage, trace, purity,
  /// measured-system diagonal, outcome.
  std::string to_record() const;
};

/// Projectors |x_n><x_n| (x) 1_A (x) 1_M driving the non-selective step.
ProjectorFamily nonselective_family(const SchemeConfig& config);

/// Controlled pointer shift: |x_n>|M_0> -> |x_n>|M_{n+1}>, a modular
/// permutation on the pointer space conditioned on the measured eigenvalue.
Matrix pointer_shift_unitary(const SchemeConfig& config);

SchemeState prepare_initial(const SchemeConfig& config);
SchemeState apply_nonselective(const SchemeState& state);
SchemeState apply_entangling(const SchemeState& state);
SchemeState read_event(const SchemeState& state, SplitMix64& rng);

struct SchemeTranscript {
  std::array<SchemeState, 4> states;
  int outcome;

  std::string to_record() const;
};

/// Runs all four steps; deterministic given config.seed.
SchemeTranscript run_scheme(const SchemeConfig& config);

}  // namespace measuretherm
