#pragma once

#include <cstdint>
#include <vector>

#include "measuretherm/operators.hpp"
#include "measuretherm/rng.hpp"

namespace measuretherm {

/// Piecewise-constant driving: Hamiltonians at grid times t_k = k * step for
/// k = 0..N, inverse temperature beta. Ordered products are evaluated
/// right-to-left (earliest factor acts first).
struct DrivingProtocol {
  std::vector<HermitianOperator> hamiltonians;
  double step = 0.0;
  double beta = 0.0;

  void validate() const;
  int n_steps() const { return static_cast<int>(hamiltonians.size()) - 1; }
  double total_time() const { return step * n_steps(); }
  Eigen::Index dimension() const { return hamiltonians.front().dimension(); }
  const HermitianOperator& hamiltonian(int k) const {
    return hamiltonians[static_cast<std::size_t>(k)];
  }
};

/// Grid indices at which an event reading is scheduled.
struct EventReadingSchedule {
  std::vector<int> reading_steps;

  void validate(int n_steps) const;
  int count() const { return static_cast<int>(reading_steps.size()); }
  bool contains(int step) const;
};

struct WorkAtom {
  double work = 0.0;
  double probability = 0.0;
};

struct WorkDistribution {
  std::vector<WorkAtom> atoms;

  void validate() const;
  double mean() const;
  double exponential_average(double beta) const;  // sum exp(-beta W) p(W)
};

/// Ordered product of exp(-i H(t_k) step) for k in [from_step, to_step).
Matrix propagator(const DrivingProtocol& protocol, int from_step, int to_step);

/// Two-energy-measurement work statistics: atoms (E_m(t_f) - E_n(0)) with
/// probabilities resolved on spectral projectors, so degenerate subspaces
/// carry no basis ambiguity. Atoms closer than 1e-9 in work merge.
WorkDistribution work_distribution(const DrivingProtocol& protocol);

/// sum exp(-beta W) p(W); equals exp(-beta dF) for any driving.
double mgf_work(const DrivingProtocol& protocol);

/// -1/beta ln(Z_final / Z_initial).
double free_energy_difference(const DrivingProtocol& protocol);

/// tr[H_H(t_f) rho_can(0)] - tr[H(0) rho_can(0)].
double average_work(const DrivingProtocol& protocol);

struct JarzynskiReport {
  double lhs = 0.0;        // event-reading trace expression
  double rhs = 0.0;        // exp(-beta dF)
  double work_shift = 0.0; // n_readings / beta
};

/// Evaluates the event-reading trace: dephasing insertions at the scheduled
/// slots of the time-ordered product, each paired with the cancelling
/// exp(-1) * exp(+1) transfer factors. Requires a non-degenerate initial
/// statistical operator; verifies lhs = exp(-beta dF) within 1e-10.
JarzynskiReport modified_jarzynski(const DrivingProtocol& protocol,
                                   const EventReadingSchedule& schedule,
                                   const ProjectorFamily& family);

/// Exponential work average recomputed with the state's definition time
/// moved to the pivot grid index; agrees with mgf_work for every pivot.
double renew_definition_time(const DrivingProtocol& protocol, int pivot);

/// Monte Carlo two-energy-measurement sampling.
WorkDistribution sample_work(const DrivingProtocol& protocol, std::size_t trials,
                             SplitMix64& rng);

/// exp(-beta H) / Z.
Matrix canonical_state(const HermitianOperator& h, double beta);
/// ln tr exp(-beta H), evaluated stably.
double log_partition(const HermitianOperator& h, double beta);

}  // namespace measuretherm
