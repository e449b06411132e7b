#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "measuretherm/random_states.hpp"
#include "measuretherm/work.hpp"

using namespace measuretherm;

namespace {

DrivingProtocol constant_protocol(const HermitianOperator& h, int steps, double beta) {
  DrivingProtocol protocol;
  protocol.step = 0.1;
  protocol.beta = beta;
  for (int k = 0; k <= steps; ++k) protocol.hamiltonians.push_back(h);
  return protocol;
}

// Two-level gap doubling: levels +-1 switch to +-2 with a sigma_x final
// Hamiltonian so that all four transition channels are open.
DrivingProtocol quench_protocol(double beta) {
  Matrix h0 = Matrix::Zero(2, 2);
  h0(0, 0) = 1.0;
  h0(1, 1) = -1.0;
  Matrix hf = Matrix::Zero(2, 2);
  hf(0, 1) = hf(1, 0) = 2.0;
  DrivingProtocol protocol;
  protocol.step = 0.3;
  protocol.beta = beta;
  protocol.hamiltonians = {HermitianOperator(h0), HermitianOperator(hf)};
  return protocol;
}

DrivingProtocol small_random_protocol(SplitMix64& rng, Eigen::Index dim, int steps,
                                      double beta) {
  DrivingProtocol protocol;
  protocol.step = 0.05;
  protocol.beta = beta;
  for (int k = 0; k <= steps; ++k) protocol.hamiltonians.push_back(random_hermitian(dim, rng));
  return protocol;
}

// Exhaustive (m, n) enumeration of the two-measurement statistics in the
// eigenvector basis; an independent oracle for work_distribution.
std::vector<WorkAtom> enumeration_oracle(const DrivingProtocol& protocol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es0(protocol.hamiltonian(0).matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> esf(
      protocol.hamiltonian(protocol.n_steps()).matrix());
  const Matrix u = propagator(protocol, 0, protocol.n_steps());
  double z0 = 0.0;
  for (Eigen::Index i = 0; i < es0.eigenvalues().size(); ++i) {
    z0 += std::exp(-protocol.beta * es0.eigenvalues()(i));
  }
  std::vector<WorkAtom> atoms;
  for (Eigen::Index n = 0; n < es0.eigenvalues().size(); ++n) {
    for (Eigen::Index m = 0; m < esf.eigenvalues().size(); ++m) {
      const Complex amp = esf.eigenvectors().col(m).adjoint() * u * es0.eigenvectors().col(n);
      atoms.push_back({esf.eigenvalues()(m) - es0.eigenvalues()(n),
                       std::norm(amp) * std::exp(-protocol.beta * es0.eigenvalues()(n)) / z0});
    }
  }
  return atoms;
}

double lookup_probability(const WorkDistribution& wd, double w) {
  for (const WorkAtom& atom : wd.atoms) {
    if (std::abs(atom.work - w) < 1e-8) return atom.probability;
  }
  return 0.0;
}

}  // namespace

TEST_SUITE("work") {

TEST_CASE("propagator: endpoints, constant driving, unitarity") {
  SplitMix64 rng(41);
  const HermitianOperator h = random_hermitian(3, rng);
  const DrivingProtocol constant = constant_protocol(h, 7, 1.0);
  CHECK((propagator(constant, 3, 3) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  const Matrix direct = hermitian_exponential(h, Complex(0.0, -0.7));
  CHECK((propagator(constant, 0, 7) - direct).cwiseAbs().maxCoeff() < 1e-10);

  for (int rep = 0; rep < 5; ++rep) {
    const DrivingProtocol p = small_random_protocol(rng, 4, 20, 1.0);
    const Matrix u = propagator(p, 0, p.n_steps());
    CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(propagator(constant, 5, 2), ConfigurationError);
}

TEST_CASE("work distribution: constant driving is a single zero atom") {
  SplitMix64 rng(43);
  const DrivingProtocol constant = constant_protocol(random_hermitian(3, rng), 5, 2.0);
  const WorkDistribution wd = work_distribution(constant);
  REQUIRE(wd.atoms.size() == 1);
  CHECK(wd.atoms[0].work == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(wd.atoms[0].probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("work distribution: quench atoms match the enumeration oracle") {
  const DrivingProtocol quench = quench_protocol(1.0);
  const WorkDistribution wd = work_distribution(quench);
  REQUIRE(wd.atoms.size() == 4);
  for (const WorkAtom& oracle : enumeration_oracle(quench)) {
    CHECK(lookup_probability(wd, oracle.work) ==
          doctest::Approx(oracle.probability).epsilon(1e-12));
  }
}

TEST_CASE("work distribution normalizes for random protocols") {
  SplitMix64 rng(47);
  for (int rep = 0; rep < 10; ++rep) {
    const DrivingProtocol p =
        small_random_protocol(rng, rng.uniform_int(2, 5), static_cast<int>(rng.uniform_int(1, 30)),
                              rng.uniform(0.2, 3.0));
    double total = 0.0;
    for (const WorkAtom& atom : work_distribution(p).atoms) total += atom.probability;
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("exponential work average: constant, quench, and random protocols") {
  SplitMix64 rng(53);
  CHECK(mgf_work(constant_protocol(random_hermitian(3, rng), 4, 1.5)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Partition-function ratio oracle for the two-level gap doubling.
  const DrivingProtocol quench = quench_protocol(1.0);
  const double oracle = (2.0 * std::cosh(2.0)) / (2.0 * std::cosh(1.0));
  CHECK(mgf_work(quench) == doctest::Approx(oracle).epsilon(1e-12));

  const DrivingProtocol p = small_random_protocol(rng, 4, 100, 1.0);
  CHECK(std::abs(mgf_work(p) - std::exp(-p.beta * free_energy_difference(p))) < 1e-10);
}

TEST_CASE("free energy difference: constant, uniform shift, gap doubling") {
  SplitMix64 rng(59);
  const HermitianOperator h = random_hermitian(4, rng);
  CHECK(free_energy_difference(constant_protocol(h, 3, 1.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  DrivingProtocol shifted = constant_protocol(h, 3, 1.3);
  const double c = 0.8;
  shifted.hamiltonians.back() =
      HermitianOperator(h.matrix() + c * Matrix::Identity(4, 4));
  CHECK(free_energy_difference(shifted) == doctest::Approx(c).epsilon(1e-12));

  CHECK(free_energy_difference(quench_protocol(1.0)) ==
        doctest::Approx(-std::log(std::cosh(2.0) / std::cosh(1.0))).epsilon(1e-12));
}

TEST_CASE("average work agrees with the distribution mean and the second law") {
  SplitMix64 rng(61);
  CHECK(average_work(constant_protocol(random_hermitian(3, rng), 4, 1.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  for (int rep = 0; rep < 200; ++rep) {
    const DrivingProtocol p =
        small_random_protocol(rng, rng.uniform_int(2, 5), static_cast<int>(rng.uniform_int(1, 20)),
                              rng.uniform(0.2, 3.0));
    const double mean = work_distribution(p).mean();
    CHECK(std::abs(average_work(p) - mean) < 1e-10);
    CHECK(average_work(p) >= free_energy_difference(p) - 1e-10);
  }
}

TEST_CASE("event readings: empty schedule reduces to the plain average") {
  SplitMix64 rng(67);
  const DrivingProtocol p = random_block_protocol(rng, {2, 2}, 30, 1.0);
  const ProjectorFamily family = ProjectorFamily::blocks({2, 2});
  const JarzynskiReport report = modified_jarzynski(p, EventReadingSchedule{}, family);
  CHECK(std::abs(report.lhs - mgf_work(p)) < 1e-12);
  CHECK(report.work_shift == 0.0);
}

TEST_CASE("event readings: identity and work shift for scheduled readings") {
  SplitMix64 rng(71);
  const std::vector<Eigen::Index> blocks = {2, 2};
  const ProjectorFamily family = ProjectorFamily::blocks(blocks);
  for (int n_readings = 1; n_readings <= 3; ++n_readings) {
    const double beta = rng.uniform(0.5, 2.0);
    const DrivingProtocol p = random_block_protocol(rng, blocks, 40, beta);
    EventReadingSchedule schedule;
    for (int r = 1; r <= n_readings; ++r) schedule.reading_steps.push_back(40 * r / (n_readings + 1));
    const JarzynskiReport report = modified_jarzynski(p, schedule, family);
    CHECK(std::abs(report.lhs - report.rhs) < 1e-10);
    CHECK(report.rhs ==
          doctest::Approx(std::exp(-beta * free_energy_difference(p))).epsilon(1e-12));
    CHECK(report.work_shift == static_cast<double>(n_readings) / beta);
  }
}

TEST_CASE("event readings: the average is schedule-invariant with paired factors") {
  SplitMix64 rng(73);
  const std::vector<Eigen::Index> blocks = {2, 2};
  const ProjectorFamily family = ProjectorFamily::blocks(blocks);
  const DrivingProtocol p = random_block_protocol(rng, blocks, 24, 1.2);
  std::vector<EventReadingSchedule> schedules;
  schedules.push_back(EventReadingSchedule{});
  schedules.push_back(EventReadingSchedule{{6}});
  schedules.push_back(EventReadingSchedule{{0, 12}});
  schedules.push_back(EventReadingSchedule{{3, 12, 21, 24}});
  std::vector<double> values;
  for (const EventReadingSchedule& s : schedules) {
    values.push_back(modified_jarzynski(p, s, family).lhs);
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    CHECK(std::abs(values[i] - values[0]) < 1e-10);
  }
}

TEST_CASE("event readings: preconditions are enforced") {
  SplitMix64 rng(79);
  const std::vector<Eigen::Index> blocks = {2, 2};
  const ProjectorFamily family = ProjectorFamily::blocks(blocks);
  const DrivingProtocol p = random_block_protocol(rng, blocks, 10, 1.0);
  EventReadingSchedule out_of_range{{11}};
  CHECK_THROWS_AS(modified_jarzynski(p, out_of_range, family), ConfigurationError);

  // Degenerate initial spectrum: identity Hamiltonian at the start.
  DrivingProtocol degenerate = p;
  degenerate.hamiltonians.front() = HermitianOperator(Matrix::Identity(4, 4));
  CHECK_THROWS_AS(modified_jarzynski(degenerate, EventReadingSchedule{{2}}, family),
                  ConfigurationError);
}

TEST_CASE("renewing the definition time never changes the average") {
  SplitMix64 rng(83);
  const DrivingProtocol p3 = small_random_protocol(rng, 3, 3, 1.0);
  const double reference = mgf_work(p3);
  CHECK(renew_definition_time(p3, 0) == doctest::Approx(reference).epsilon(1e-12));
  CHECK(std::abs(renew_definition_time(p3, p3.n_steps()) - reference) < 1e-10);
  std::vector<double> values;
  for (int pivot = 0; pivot <= p3.n_steps(); ++pivot) {
    values.push_back(renew_definition_time(p3, pivot));
  }
  for (double v : values) {
    for (double w : values) CHECK(std::abs(v - w) < 1e-10);
  }

  const DrivingProtocol p = small_random_protocol(rng, 4, 25, 0.8);
  for (int pivot : {0, 7, 25}) {
    CHECK(std::abs(renew_definition_time(p, pivot) - mgf_work(p)) < 1e-10);
  }
}

TEST_CASE("sampled work: constant driving and quench convergence") {
  SplitMix64 rng(89);
  const DrivingProtocol constant = constant_protocol(random_hermitian(2, rng), 3, 1.0);
  const WorkDistribution all_zero = sample_work(constant, 2000, rng);
  REQUIRE(all_zero.atoms.size() == 1);
  CHECK(all_zero.atoms[0].work == doctest::Approx(0.0).epsilon(1e-12));

  const DrivingProtocol quench = quench_protocol(1.0);
  const std::size_t trials = 100000;
  SplitMix64 quench_rng(11);
  const WorkDistribution empirical = sample_work(quench, trials, quench_rng);
  const WorkDistribution exact = work_distribution(quench);

  // The exponential-average estimator stays within four standard errors.
  double mean_exp = 0.0;
  double second_moment = 0.0;
  for (const WorkAtom& atom : empirical.atoms) {
    const double g = std::exp(-quench.beta * atom.work);
    mean_exp += g * atom.probability;
    second_moment += g * g * atom.probability;
  }
  const double se =
      std::sqrt((second_moment - mean_exp * mean_exp) / static_cast<double>(trials));
  const double target = std::exp(-quench.beta * free_energy_difference(quench));
  CHECK(std::abs(mean_exp - target) < 4.0 * se);

  // Every exact atom is matched within three multinomial standard deviations.
  for (const WorkAtom& atom : exact.atoms) {
    const double p_hat = lookup_probability(empirical, atom.work);
    const double sd = std::sqrt(atom.probability * (1.0 - atom.probability) /
                                static_cast<double>(trials));
    CHECK(std::abs(p_hat - atom.probability) < 3.0 * sd);
  }
}

TEST_CASE("sampled work converges with trial count") {
  const DrivingProtocol quench = quench_protocol(0.7);
  const double target = std::exp(-quench.beta * free_energy_difference(quench));
  int improved = 0;
  const int repetitions = 20;
  for (int rep = 0; rep < repetitions; ++rep) {
    SplitMix64 rng_small(1000 + rep);
    SplitMix64 rng_large(2000 + rep);
    auto estimator = [&](const WorkDistribution& wd) {
      double g = 0.0;
      for (const WorkAtom& atom : wd.atoms) {
        g += std::exp(-quench.beta * atom.work) * atom.probability;
      }
      return std::abs(g - target);
    };
    const double coarse = estimator(sample_work(quench, 1000, rng_small));
    const double fine = estimator(sample_work(quench, 100000, rng_large));
    if (fine < coarse) ++improved;
  }
  CHECK(improved >= 19);
}

TEST_CASE("forward and reversed real protocols satisfy the detailed ratio") {
  SplitMix64 rng(97);
  for (int rep = 0; rep < 5; ++rep) {
    DrivingProtocol forward;
    forward.step = 0.2;
    forward.beta = rng.uniform(0.4, 1.6);
    const Eigen::Index dim = rng.uniform_int(2, 4);
    const int steps = static_cast<int>(rng.uniform_int(1, 6));
    for (int k = 0; k <= steps; ++k) {
      forward.hamiltonians.push_back(random_real_hermitian(dim, rng));
    }
    DrivingProtocol reversed = forward;
    std::reverse(reversed.hamiltonians.begin(), reversed.hamiltonians.end());

    const WorkDistribution p_f = work_distribution(forward);
    const WorkDistribution p_r = work_distribution(reversed);
    const double d_f = free_energy_difference(forward);
    for (const WorkAtom& atom : p_f.atoms) {
      const double reverse_prob = lookup_probability(p_r, -atom.work);
      if (atom.probability < 1e-9 || reverse_prob < 1e-9) continue;
      const double ratio = atom.probability / reverse_prob;
      const double expected = std::exp(forward.beta * (atom.work - d_f));
      CHECK(std::abs(ratio - expected) < 1e-8 * std::max(1.0, expected));
    }
  }
}

}  // TEST_SUITE
