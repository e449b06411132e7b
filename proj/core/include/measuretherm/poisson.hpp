#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "measuretherm/operators.hpp"
#include "measuretherm/rng.hpp"

namespace measuretherm {

/// One element of the enlarged ensemble: a conventional density matrix plus
/// the member's own measurement occurrence time. `measured` flips to true
/// exactly when the simulation time passes the occurrence time and never
/// reverts.
struct EnsembleMember {
  DensityMatrix rho;
  double occurrence_time = 0.0;
  bool measured = false;
};

/// Population of members realizing the statistical description of a single
/// measurement occurrence: each member is dephased once, at its own
/// exponentially distributed occurrence time with mean `characteristic_time`.
struct EnlargedEnsemble {
  std::vector<EnsembleMember> members;
  double characteristic_time = 0.0;
  ProjectorFamily family;
  double current_time = 0.0;

  void validate() const;
};

/// i.i.d. draws from the density (1/delta_tau) exp(-tau/delta_tau); the
/// draws are strictly positive, so no member is measured at exactly zero.
std::vector<double> sample_occurrence_times(std::size_t count, double delta_tau,
                                            SplitMix64& rng);

EnlargedEnsemble make_ensemble(const DensityMatrix& initial, std::size_t count,
                               double delta_tau, ProjectorFamily family, SplitMix64& rng);

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;

  /// State at a grid time (matched within 1e-12).
  const DensityMatrix& at(double tau) const;
};

/// Hamiltonian as a function of time, sampled at grid-interval starts and
/// held constant across each interval. An empty function means free (zero
/// Hamiltonian) evolution.
using TimeDependentHamiltonian = std::function<HermitianOperator(double)>;

/// Advances every member along the schedule, dephasing each one at its own
/// occurrence time, and returns the member-averaged state at each grid
/// point. The average uses fixed-order summation so runs are bit-stable.
Trajectory evolve_ensemble(EnlargedEnsemble& ensemble, const std::vector<double>& schedule,
                           const TimeDependentHamiltonian& hamiltonian = {});

/// Reference trajectory with neither measurement nor event reading.
Trajectory schroedinger_trajectory(const DensityMatrix& initial,
                                   const std::vector<double>& schedule,
                                   const TimeDependentHamiltonian& hamiltonian = {});

/// Closed-form statistical description at a grid time: family-diagonal part
/// of the reference state unchanged, family-off-diagonal part scaled by
/// exp(-1). The step factor at tau = 0 is taken as already applied (the
/// cut-off convention: observation happens after the averaged occurrence).
DensityMatrix analytic_solution(const Trajectory& schroedinger, const ProjectorFamily& family,
                                double tau);

/// Fraction of members not yet measured at the given time.
double survival_fraction(const EnlargedEnsemble& ensemble, double tau);

}  // namespace measuretherm
