#include <doctest.h>

#include <cmath>

#include "measuretherm/random_states.hpp"
#include "measuretherm/regression.hpp"

using namespace measuretherm;

namespace {

RegressionInstance uniform_two_outcome() {
  RegressionInstance instance;
  instance.coefficients = {Complex(M_SQRT1_2, 0.0), Complex(M_SQRT1_2, 0.0)};
  instance.pointer_count = 2;
  instance.target_outcome = 0;
  instance.chi = {1.0, 0.0};
  return instance;
}

// Brute-force grid search over the mixture weights.
double grid_search_minimum(const LinearSystem& system, double lo, double hi, double step) {
  double best = 1e300;
  Eigen::VectorXd u(2);
  for (double u0 = lo; u0 <= hi + 1e-12; u0 += step) {
    for (double u1 = lo; u1 <= hi + 1e-12; u1 += step) {
      u << u0, u1;
      best = std::min(best, (system.a * u - system.b).norm());
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("regression") {

TEST_CASE("instance validation") {
  RegressionInstance bad = uniform_two_outcome();
  bad.chi = {0.4, 0.4};
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
  RegressionInstance zero_target = uniform_two_outcome();
  zero_target.coefficients = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
  zero_target.target_outcome = 1;
  CHECK_THROWS_AS(zero_target.validate(), ConfigurationError);
}

TEST_CASE("constraint system structure") {
  RegressionInstance trivial;
  trivial.coefficients = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
  trivial.pointer_count = 1;
  trivial.target_outcome = 0;
  trivial.chi = {1.0};
  const LinearSystem single = build_constraints(trivial);
  CHECK(single.a.rows() == 1);
  CHECK(single.a.cols() == 1);
  CHECK(single.a(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(single.b(0) == doctest::Approx(1.0).epsilon(1e-15));

  const LinearSystem uniform = build_constraints(uniform_two_outcome());
  // Two pointer labels times two nonzero outcomes.
  CHECK(uniform.a.rows() == 4);
  CHECK(uniform.a.cols() == 2);
  int target_rows = 0;
  for (Eigen::Index r = 0; r < uniform.b.size(); ++r) {
    if (uniform.b(r) != 0.0) ++target_rows;
  }
  CHECK(target_rows == 1);  // only the (r = 0, n = target) row carries chi_0 = 1
}

TEST_CASE("least squares: consistent systems, closed form, linearity") {
  LinearSystem consistent;
  consistent.a = Eigen::MatrixXd::Identity(2, 2);
  consistent.b = Eigen::VectorXd::Ones(2);
  const ResidualReport exact = solve_least_squares(consistent);
  CHECK(exact.residual < 1e-12);
  CHECK(exact.solvable);

  const LinearSystem uniform = build_constraints(uniform_two_outcome());
  const ResidualReport report = solve_least_squares(uniform);
  CHECK(report.residual == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(report.residual * report.residual == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(report.solvable);
  // Exhaustive grid search cannot do better.
  CHECK(grid_search_minimum(uniform, -2.0, 2.0, 0.01) >= report.residual - 1e-4);

  LinearSystem scaled = uniform;
  scaled.b *= 3.0;
  CHECK(solve_least_squares(scaled).residual ==
        doctest::Approx(3.0 * report.residual).epsilon(1e-12));
}

TEST_CASE("verification: trivial instances are solvable, superpositions are not") {
  RegressionInstance trivial;
  trivial.coefficients = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
  trivial.pointer_count = 2;
  trivial.target_outcome = 0;
  trivial.chi = {0.25, 0.75};
  const RegressionReport solvable = verify_regression(trivial);
  CHECK(solvable.unconstrained.solvable);
  CHECK(solvable.unconstrained.residual < 1e-12);

  RegressionInstance balanced = uniform_two_outcome();
  balanced.chi = {0.7, 0.3};
  const RegressionReport report = verify_regression(balanced);
  CHECK_FALSE(report.unconstrained.solvable);
  CHECK(report.unconstrained.residual > 1e-3);
  CHECK(report.constrained_residual >= report.unconstrained.residual - 1e-12);
}

TEST_CASE("solvability depends only on the coefficient magnitudes") {
  SplitMix64 rng(211);
  RegressionInstance base = uniform_two_outcome();
  base.chi = {0.6, 0.4};
  const double reference = verify_regression(base).unconstrained.residual;
  for (int rep = 0; rep < 10; ++rep) {
    RegressionInstance phased = base;
    for (Complex& c : phased.coefficients) {
      c *= std::exp(Complex(0.0, rng.uniform(0.0, 6.283185307179586)));
    }
    CHECK(verify_regression(phased).unconstrained.residual ==
          doctest::Approx(reference).epsilon(1e-12));
  }
}

TEST_CASE("random substantial instances always leave a residual") {
  SplitMix64 rng(223);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index outcomes = rng.uniform_int(2, 5);
    RegressionInstance instance;
    for (int attempt = 0;; ++attempt) {
      REQUIRE(attempt < 300);
      instance.coefficients = random_amplitudes(outcomes, rng);
      int substantial = 0;
      double best = 0.0;
      for (std::size_t n = 0; n < instance.coefficients.size(); ++n) {
        const double w = std::norm(instance.coefficients[n]);
        if (w >= 0.05) ++substantial;
        if (w > best) {
          best = w;
          instance.target_outcome = static_cast<int>(n);
        }
      }
      if (substantial >= 2) break;
    }
    instance.pointer_count = static_cast<int>(rng.uniform_int(2, 4));
    instance.chi = random_probabilities(instance.pointer_count, rng);
    const RegressionReport report = verify_regression(instance);
    CHECK(report.unconstrained.residual > 1e-3);
    CHECK_FALSE(report.unconstrained.solvable);
    // The physical (simplex) mixture can only do worse.
    CHECK(report.constrained_residual >= report.unconstrained.residual - 1e-12);
    double weight_total = 0.0;
    for (Eigen::Index r = 0; r < report.constrained_u.size(); ++r) {
      CHECK(report.constrained_u(r) >= -1e-15);
      weight_total += report.constrained_u(r);
    }
    CHECK(weight_total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("report records carry the decision data") {
  const RegressionReport report = verify_regression(uniform_two_outcome());
  const std::string record = report.to_record();
  CHECK(record.find("solvable=false") != std::string::npos);
  CHECK(record.find("constrained_residual=") != std::string::npos);
}

}  // TEST_SUITE
