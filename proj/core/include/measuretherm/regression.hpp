#pragma once

#include <string>
#include <vector>

#include "measuretherm/operators.hpp"

namespace measuretherm {

/// Can a post-selection state be written as a pointer-mixture of unitarily
/// post-processed non-selective states? The instance fixes the measured
/// superposition c_n, the number of pointer labels R, the selected outcome
/// m, and the mixture spectrum chi_r over pointer labels.
struct RegressionInstance {
  std::vector<Complex> coefficients;
  int pointer_count = 0;
  int target_outcome = 0;
  std::vector<double> chi;

  void validate() const;
};

struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

/// One equation u_r |c_n|^2 = delta_{mn} chi_r per pointer label r and
/// per outcome n with nonzero weight; unknowns u_r.
LinearSystem build_constraints(const RegressionInstance& instance);

struct ResidualReport {
  Eigen::VectorXd best_u;
  double residual = 0.0;  // min ||A u - b||_2
  bool solvable = false;  // residual < 1e-10
};

/// Unconstrained least squares; deterministic.
ResidualReport solve_least_squares(const LinearSystem& system);

struct RegressionReport {
  RegressionInstance instance;
  ResidualReport unconstrained;
  /// Best mixture under the physical constraints u_r >= 0, sum u_r = 1.
  Eigen::VectorXd constrained_u;
  double constrained_residual = 0.0;

  std::string to_record() const;
};

/// Certifies (non-)solvability: solvable exactly when a single coefficient
/// carries all the weight; any instance with two substantial coefficients
/// leaves a residual above 1e-3.
RegressionReport verify_regression(const RegressionInstance& instance);

}  // namespace measuretherm
