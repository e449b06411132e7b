#include "measuretherm/poisson.hpp"

#include <cmath>
#include <sstream>

namespace measuretherm {

namespace {

constexpr double kGridMatchTol = 1e-12;

// Spectral cache so that one interval's Hamiltonian serves every member.
struct IntervalEvolver {
  bool free_evolution = true;
  Matrix eigenvectors;
  RVector eigenvalues;

  explicit IntervalEvolver(const TimeDependentHamiltonian& hamiltonian, double t_start,
                           Eigen::Index dim) {
    if (!hamiltonian) return;
    const HermitianOperator h = hamiltonian(t_start);
    if (h.dimension() != dim) {
      throw ConfigurationError("ensemble Hamiltonian dimension does not match member dimension");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    eigenvectors = es.eigenvectors();
    eigenvalues = es.eigenvalues();
    free_evolution = false;
  }

  Matrix propagate(const Matrix& rho, double dt) const {
    if (free_evolution || dt == 0.0) return rho;
    CVector phases(eigenvalues.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
      phases(i) = std::exp(Complex(0.0, -dt * eigenvalues(i)));
    }
    const Matrix u = eigenvectors * phases.asDiagonal() * eigenvectors.adjoint();
    return u * rho * u.adjoint();
  }
};

}  // namespace

void EnlargedEnsemble::validate() const {
  if (members.empty()) throw ConfigurationError("ensemble needs at least one member");
  if (characteristic_time <= 0.0) throw ConfigurationError("characteristic time must be positive");
  const Eigen::Index dim = members.front().rho.dimension();
  for (const EnsembleMember& m : members) {
    if (m.rho.dimension() != dim) throw ConfigurationError("ensemble members have mixed dimensions");
  }
  if (family.dimension() != dim) {
    throw ConfigurationError("ensemble family dimension does not match member dimension");
  }
}

std::vector<double> sample_occurrence_times(std::size_t count, double delta_tau,
                                            SplitMix64& rng) {
  if (count < 1) throw ConfigurationError("sample count must be at least one");
  if (delta_tau <= 0.0) throw ConfigurationError("delta_tau must be positive");
  std::vector<double> times(count);
  for (double& t : times) t = rng.exponential(delta_tau);
  return times;
}

EnlargedEnsemble make_ensemble(const DensityMatrix& initial, std::size_t count,
                               double delta_tau, ProjectorFamily family, SplitMix64& rng) {
  const std::vector<double> times = sample_occurrence_times(count, delta_tau, rng);
  EnlargedEnsemble ensemble{{}, delta_tau, std::move(family), 0.0};
  ensemble.members.reserve(count);
  for (double t : times) ensemble.members.push_back(EnsembleMember{initial, t, false});
  ensemble.validate();
  return ensemble;
}

const DensityMatrix& Trajectory::at(double tau) const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - tau) <= kGridMatchTol) return states[i];
  }
  std::ostringstream os;
  os << "time " << tau << " is not on the trajectory grid";
  throw ConfigurationError(os.str());
}

Trajectory evolve_ensemble(EnlargedEnsemble& ensemble, const std::vector<double>& schedule,
                           const TimeDependentHamiltonian& hamiltonian) {
  ensemble.validate();
  if (schedule.empty()) throw ConfigurationError("evolution schedule is empty");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) {
      throw ConfigurationError("evolution schedule must be strictly increasing");
    }
  }
  if (schedule.front() + kGridMatchTol < ensemble.current_time) {
    throw ConfigurationError("schedule starts before the ensemble's current time");
  }

  const Eigen::Index dim = ensemble.members.front().rho.dimension();
  Trajectory traj;
  traj.times = schedule;
  traj.states.reserve(schedule.size());

  auto record_average = [&]() {
    Matrix acc = Matrix::Zero(dim, dim);
    for (const EnsembleMember& m : ensemble.members) acc += m.rho.entries();
    acc /= static_cast<double>(ensemble.members.size());
    traj.states.push_back(DensityMatrix::trusted(std::move(acc)));
  };

  double t_prev = ensemble.current_time;
  for (double t_next : schedule) {
    if (t_next > t_prev + kGridMatchTol) {
      const IntervalEvolver evolver(hamiltonian, t_prev, dim);
      for (EnsembleMember& m : ensemble.members) {
        Matrix rho = m.rho.entries();
        if (!m.measured && m.occurrence_time > t_prev && m.occurrence_time <= t_next) {
          rho = evolver.propagate(rho, m.occurrence_time - t_prev);
          rho = dephase_matrix(rho, ensemble.family);
          rho = evolver.propagate(rho, t_next - m.occurrence_time);
          m.measured = true;
        } else {
          rho = evolver.propagate(rho, t_next - t_prev);
        }
        m.rho = DensityMatrix::trusted(std::move(rho), m.rho.nominal_trace());
      }
      t_prev = t_next;
    }
    record_average();
  }
  ensemble.current_time = t_prev;
  return traj;
}

Trajectory schroedinger_trajectory(const DensityMatrix& initial,
                                   const std::vector<double>& schedule,
                                   const TimeDependentHamiltonian& hamiltonian) {
  if (schedule.empty()) throw ConfigurationError("evolution schedule is empty");
  Trajectory traj;
  traj.times = schedule;
  traj.states.reserve(schedule.size());
  DensityMatrix rho = initial;
  double t_prev = 0.0;
  for (double t_next : schedule) {
    if (t_next > t_prev + kGridMatchTol) {
      const IntervalEvolver evolver(hamiltonian, t_prev, rho.dimension());
      rho = DensityMatrix::trusted(evolver.propagate(rho.entries(), t_next - t_prev),
                                   rho.nominal_trace());
      t_prev = t_next;
    }
    traj.states.push_back(rho);
  }
  return traj;
}

DensityMatrix analytic_solution(const Trajectory& schroedinger, const ProjectorFamily& family,
                                double tau) {
  const DensityMatrix& rho_sch = schroedinger.at(tau);
  const Matrix diag = dephase_matrix(rho_sch.entries(), family);
  const double decay = std::exp(-1.0);
  Matrix out = diag + decay * (rho_sch.entries() - diag);
  return DensityMatrix::trusted(std::move(out), rho_sch.nominal_trace());
}

double survival_fraction(const EnlargedEnsemble& ensemble, double tau) {
  ensemble.validate();
  std::size_t alive = 0;
  for (const EnsembleMember& m : ensemble.members) {
    if (m.occurrence_time > tau) ++alive;
  }
  return static_cast<double>(alive) / static_cast<double>(ensemble.members.size());
}

}  // namespace measuretherm
