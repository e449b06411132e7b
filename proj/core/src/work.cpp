#include "measuretherm/work.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace measuretherm {

namespace {

constexpr double kWorkMergeTol = 1e-9;
constexpr double kJarzynskiTol = 1e-10;
// Transition weights below this are eigensolver/propagator roundoff, not
// physical channels; dropping them costs far less than the 1e-10
// normalization budget.
constexpr double kAtomFloor = 1e-13;

struct Spectrum {
  RVector eigenvalues;
  Matrix eigenvectors;

  explicit Spectrum(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    eigenvalues = es.eigenvalues();
    eigenvectors = es.eigenvectors();
  }

  Matrix exponential(double scale) const {
    CVector d(eigenvalues.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(scale * eigenvalues(i));
    return eigenvectors * d.asDiagonal() * eigenvectors.adjoint();
  }
};

struct SpectralCluster {
  double energy = 0.0;  // weighted representative value
  Matrix projector;
};

std::vector<SpectralCluster> cluster_spectrum(const Spectrum& s, double tol = kWorkMergeTol) {
  std::vector<SpectralCluster> clusters;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= s.eigenvalues.size(); ++i) {
    if (i == s.eigenvalues.size() || s.eigenvalues(i) - s.eigenvalues(i - 1) > tol) {
      const Eigen::Index count = i - start;
      const Matrix block = s.eigenvectors.middleCols(start, count);
      clusters.push_back({s.eigenvalues.segment(start, count).mean(), block * block.adjoint()});
      start = i;
    }
  }
  return clusters;
}

WorkDistribution merge_atoms(std::vector<WorkAtom> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const WorkAtom& a, const WorkAtom& b) { return a.work < b.work; });
  WorkDistribution out;
  for (const WorkAtom& atom : raw) {
    if (atom.probability <= kAtomFloor) continue;
    if (!out.atoms.empty() && atom.work - out.atoms.back().work <= kWorkMergeTol) {
      WorkAtom& last = out.atoms.back();
      const double p = last.probability + atom.probability;
      last.work = (last.work * last.probability + atom.work * atom.probability) / p;
      last.probability = p;
    } else {
      out.atoms.push_back(atom);
    }
  }
  out.validate();
  return out;
}

double log_sum_exp(const RVector& exponents) {
  const double m = exponents.maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < exponents.size(); ++i) s += std::exp(exponents(i) - m);
  return m + std::log(s);
}

}  // namespace

void DrivingProtocol::validate() const {
  if (hamiltonians.size() < 2) {
    throw ConfigurationError("protocol needs Hamiltonians at both endpoints (N >= 1)");
  }
  const Eigen::Index dim = hamiltonians.front().dimension();
  for (const HermitianOperator& h : hamiltonians) {
    if (h.dimension() != dim) throw ConfigurationError("protocol Hamiltonians have mixed dimensions");
  }
  if (step <= 0.0) throw ConfigurationError("protocol step must be positive");
  if (beta <= 0.0) throw ConfigurationError("protocol beta must be positive");
}

void EventReadingSchedule::validate(int n_steps) const {
  int prev = -1;
  for (int idx : reading_steps) {
    if (idx < 0 || idx > n_steps) {
      std::ostringstream os;
      os << "reading index " << idx << " outside the grid [0, " << n_steps << "]";
      throw ConfigurationError(os.str());
    }
    if (idx <= prev) throw ConfigurationError("reading indices must be strictly increasing");
    prev = idx;
  }
}

bool EventReadingSchedule::contains(int step) const {
  return std::find(reading_steps.begin(), reading_steps.end(), step) != reading_steps.end();
}

void WorkDistribution::validate() const {
  double total = 0.0;
  for (const WorkAtom& a : atoms) {
    if (a.probability < -1e-12) throw InvariantViolation("work atom probability below -1e-12");
    total += a.probability;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "work probabilities sum to " << total << "; off one beyond 1e-10";
    throw InvariantViolation(os.str());
  }
}

double WorkDistribution::mean() const {
  double m = 0.0;
  for (const WorkAtom& a : atoms) m += a.work * a.probability;
  return m;
}

double WorkDistribution::exponential_average(double beta) const {
  double g = 0.0;
  for (const WorkAtom& a : atoms) g += std::exp(-beta * a.work) * a.probability;
  return g;
}

Matrix propagator(const DrivingProtocol& protocol, int from_step, int to_step) {
  protocol.validate();
  if (from_step < 0 || to_step > protocol.n_steps() || from_step > to_step) {
    throw ConfigurationError("propagator step range is invalid");
  }
  const Eigen::Index dim = protocol.dimension();
  Matrix u = Matrix::Identity(dim, dim);
  for (int k = from_step; k < to_step; ++k) {
    u = evolution_operator(protocol.hamiltonian(k), protocol.step) * u;
  }
  return u;
}

WorkDistribution work_distribution(const DrivingProtocol& protocol) {
  protocol.validate();
  const Spectrum initial(protocol.hamiltonian(0));
  const Spectrum final_h(protocol.hamiltonian(protocol.n_steps()));
  const Matrix u = propagator(protocol, 0, protocol.n_steps());

  const std::vector<SpectralCluster> in_clusters = cluster_spectrum(initial);
  const std::vector<SpectralCluster> out_clusters = cluster_spectrum(final_h);

  const double log_z0 = log_partition(protocol.hamiltonian(0), protocol.beta);

  std::vector<WorkAtom> raw;
  raw.reserve(in_clusters.size() * out_clusters.size());
  for (const SpectralCluster& in : in_clusters) {
    const double weight = std::exp(-protocol.beta * in.energy - log_z0);
    const Matrix evolved = u * in.projector * u.adjoint();
    for (const SpectralCluster& out : out_clusters) {
      const double transition = (out.projector * evolved).trace().real();
      raw.push_back({out.energy - in.energy, weight * transition});
    }
  }
  return merge_atoms(std::move(raw));
}

double mgf_work(const DrivingProtocol& protocol) {
  return work_distribution(protocol).exponential_average(protocol.beta);
}

double log_partition(const HermitianOperator& h, double beta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  return log_sum_exp(-beta * es.eigenvalues());
}

Matrix canonical_state(const HermitianOperator& h, double beta) {
  const Spectrum s(h);
  const double m = (-beta * s.eigenvalues).maxCoeff();
  CVector d(s.eigenvalues.size());
  double z = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double w = std::exp(-beta * s.eigenvalues(i) - m);
    d(i) = w;
    z += w;
  }
  d /= z;
  return s.eigenvectors * d.asDiagonal() * s.eigenvectors.adjoint();
}

double free_energy_difference(const DrivingProtocol& protocol) {
  protocol.validate();
  const double log_z0 = log_partition(protocol.hamiltonian(0), protocol.beta);
  const double log_zf = log_partition(protocol.hamiltonian(protocol.n_steps()), protocol.beta);
  return -(log_zf - log_z0) / protocol.beta;
}

double average_work(const DrivingProtocol& protocol) {
  protocol.validate();
  const Matrix rho0 = canonical_state(protocol.hamiltonian(0), protocol.beta);
  const Matrix u = propagator(protocol, 0, protocol.n_steps());
  const Matrix h_heisenberg =
      u.adjoint() * protocol.hamiltonian(protocol.n_steps()).matrix() * u;
  const double e_final = (h_heisenberg * rho0).trace().real();
  const double e_initial = (protocol.hamiltonian(0).matrix() * rho0).trace().real();
  return e_final - e_initial;
}

JarzynskiReport modified_jarzynski(const DrivingProtocol& protocol,
                                   const EventReadingSchedule& schedule,
                                   const ProjectorFamily& family) {
  protocol.validate();
  schedule.validate(protocol.n_steps());
  if (family.dimension() != protocol.dimension()) {
    throw ConfigurationError("projector family dimension does not match the protocol");
  }

  // The initial statistical operator must be non-degenerate: canonical
  // weights of H(0) pairwise separated beyond 1e-10.
  {
    const Spectrum s0(protocol.hamiltonian(0));
    const double log_z0 = log_partition(protocol.hamiltonian(0), protocol.beta);
    RVector w(s0.eigenvalues.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      w(i) = std::exp(-protocol.beta * s0.eigenvalues(i) - log_z0);
    }
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      for (Eigen::Index j = i + 1; j < w.size(); ++j) {
        if (std::abs(w(i) - w(j)) <= 1e-10) {
          throw ConfigurationError(
              "initial statistical operator is degenerate; event-reading trace undefined");
        }
      }
    }
  }

  const int n = protocol.n_steps();
  const Eigen::Index dim = protocol.dimension();
  const double beta = protocol.beta;
  const double unit_out = std::exp(-1.0);  // transfer factor attached inside the product
  int readings = 0;

  // Ordered evaluation, earliest factor first: the canonical state, then per
  // step the raise at t_k, any scheduled dephasing in the slot [t_k, t_k+1),
  // then the lower at t_{k+1}. Heisenberg-frame Hamiltonians follow the
  // accumulated propagator.
  Matrix accumulated = canonical_state(protocol.hamiltonian(0), beta);
  Matrix u_so_far = Matrix::Identity(dim, dim);
  Spectrum frame(protocol.hamiltonian(0));
  for (int k = 0; k < n; ++k) {
    accumulated = frame.exponential(+beta) * accumulated;
    if (schedule.contains(k)) {
      accumulated = unit_out * dephase_matrix(accumulated, family);
      ++readings;
    }
    u_so_far = evolution_operator(protocol.hamiltonian(k), protocol.step) * u_so_far;
    const HermitianOperator next_frame(u_so_far.adjoint() *
                                       protocol.hamiltonian(k + 1).matrix() * u_so_far);
    frame = Spectrum(next_frame);
    accumulated = frame.exponential(-beta) * accumulated;
  }
  if (schedule.contains(n)) {
    accumulated = unit_out * dephase_matrix(accumulated, family);
    ++readings;
  }

  // The paired transfer factors exp(+1) sit outside the ordered product.
  const double lhs = accumulated.trace().real() * std::exp(static_cast<double>(readings));
  const double rhs = std::exp(-beta * free_energy_difference(protocol));
  if (std::abs(lhs - rhs) > kJarzynskiTol) {
    std::ostringstream os;
    os << "event-reading trace " << lhs << " deviates from " << rhs << " beyond 1e-10";
    throw InvariantViolation(os.str());
  }
  return JarzynskiReport{lhs, rhs, static_cast<double>(readings) / beta};
}

double renew_definition_time(const DrivingProtocol& protocol, int pivot) {
  protocol.validate();
  if (pivot < 0 || pivot > protocol.n_steps()) {
    throw ConfigurationError("renewal pivot outside the grid");
  }
  const double beta = protocol.beta;
  const Matrix u_from_pivot = propagator(protocol, pivot, protocol.n_steps());
  const Matrix h_final_frame = u_from_pivot.adjoint() *
                               protocol.hamiltonian(protocol.n_steps()).matrix() * u_from_pivot;
  const Spectrum final_spec{HermitianOperator(h_final_frame)};
  const Spectrum pivot_spec(protocol.hamiltonian(pivot));

  const Matrix lower = final_spec.exponential(-beta);
  const Matrix raise = pivot_spec.exponential(+beta);
  const Matrix rho_pivot = canonical_state(protocol.hamiltonian(pivot), beta);

  const double log_z0 = log_partition(protocol.hamiltonian(0), beta);
  const double log_zp = log_partition(protocol.hamiltonian(pivot), beta);
  return (lower * raise * rho_pivot).trace().real() * std::exp(log_zp - log_z0);
}

WorkDistribution sample_work(const DrivingProtocol& protocol, std::size_t trials,
                             SplitMix64& rng) {
  protocol.validate();
  if (trials < 1) throw ConfigurationError("sampling requires at least one trial");
  const Spectrum initial(protocol.hamiltonian(0));
  const Spectrum final_h(protocol.hamiltonian(protocol.n_steps()));
  const Matrix u = propagator(protocol, 0, protocol.n_steps());
  const Matrix amplitudes = final_h.eigenvectors.adjoint() * u * initial.eigenvectors;
  const Eigen::Index dim = protocol.dimension();

  const double log_z0 = log_partition(protocol.hamiltonian(0), protocol.beta);
  std::vector<double> initial_weights(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    initial_weights[static_cast<std::size_t>(i)] =
        std::exp(-protocol.beta * initial.eigenvalues(i) - log_z0);
  }

  std::vector<std::vector<double>> transition(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    std::vector<double>& col = transition[static_cast<std::size_t>(i)];
    col.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index m = 0; m < dim; ++m) {
      col[static_cast<std::size_t>(m)] = std::norm(amplitudes(m, i));
    }
  }

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t i = rng.discrete(initial_weights);
    const std::size_t m = rng.discrete(transition[i]);
    counts(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i)) += 1.0;
  }

  std::vector<WorkAtom> raw;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      if (counts(m, i) == 0.0) continue;
      raw.push_back({final_h.eigenvalues(m) - initial.eigenvalues(i),
                     counts(m, i) / static_cast<double>(trials)});
    }
  }
  return merge_atoms(std::move(raw));
}

}  // namespace measuretherm
