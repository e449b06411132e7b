#include "measuretherm/regression.hpp"

#include <cmath>
#include <sstream>

#include "measuretherm/report.hpp"

namespace measuretherm {

namespace {

constexpr double kNonzeroWeight = 1e-18;  // |c_n|^2 below this counts as zero
constexpr double kSolvableTol = 1e-10;

std::vector<double> squared_weights(const RegressionInstance& instance) {
  std::vector<double> w;
  w.reserve(instance.coefficients.size());
  for (const Complex& c : instance.coefficients) w.push_back(std::norm(c));
  return w;
}

}  // namespace

void RegressionInstance::validate() const {
  if (coefficients.empty()) throw ConfigurationError("instance needs at least one coefficient");
  if (pointer_count < 1) throw ConfigurationError("instance needs at least one pointer label");
  if (static_cast<int>(chi.size()) != pointer_count) {
    throw ConfigurationError("chi length must equal the pointer label count");
  }
  double chi_total = 0.0;
  for (double x : chi) {
    if (x < 0.0) throw ConfigurationError("chi entries must be nonnegative");
    chi_total += x;
  }
  if (std::abs(chi_total - 1.0) > 1e-10) {
    throw ConfigurationError("chi must be a probability vector");
  }
  double best = 0.0;
  for (const Complex& c : coefficients) best = std::max(best, std::norm(c));
  if (best <= kNonzeroWeight) throw ConfigurationError("at least one coefficient must be nonzero");
  if (target_outcome < 0 || target_outcome >= static_cast<int>(coefficients.size())) {
    throw ConfigurationError("target outcome index out of range");
  }
  if (std::norm(coefficients[static_cast<std::size_t>(target_outcome)]) <= kNonzeroWeight) {
    throw ConfigurationError("target outcome carries zero amplitude and can never be selected");
  }
}

LinearSystem build_constraints(const RegressionInstance& instance) {
  instance.validate();
  const std::vector<double> w = squared_weights(instance);
  std::vector<int> active;
  for (std::size_t n = 0; n < w.size(); ++n) {
    if (w[n] > kNonzeroWeight) active.push_back(static_cast<int>(n));
  }
  const int rows = instance.pointer_count * static_cast<int>(active.size());
  LinearSystem system;
  system.a = Eigen::MatrixXd::Zero(rows, instance.pointer_count);
  system.b = Eigen::VectorXd::Zero(rows);
  int row = 0;
  for (int r = 0; r < instance.pointer_count; ++r) {
    for (int n : active) {
      system.a(row, r) = w[static_cast<std::size_t>(n)];
      system.b(row) = (n == instance.target_outcome) ? instance.chi[static_cast<std::size_t>(r)]
                                                     : 0.0;
      ++row;
    }
  }
  return system;
}

ResidualReport solve_least_squares(const LinearSystem& system) {
  if (system.a.rows() == 0 || system.a.cols() == 0) {
    throw ConfigurationError("least-squares system is empty");
  }
  ResidualReport report;
  report.best_u = system.a.colPivHouseholderQr().solve(system.b);
  report.residual = (system.a * report.best_u - system.b).norm();
  report.solvable = report.residual < kSolvableTol;
  return report;
}

RegressionReport verify_regression(const RegressionInstance& instance) {
  RegressionReport report;
  report.instance = instance;
  const LinearSystem system = build_constraints(instance);
  report.unconstrained = solve_least_squares(system);

  // Physical mixtures need u_r >= 0 with sum u_r = 1. The objective
  // decouples per pointer label, so the simplex-constrained minimum is a
  // water-filling problem: u_r(mu) = max(0, (chi_r w_m - mu) / s4), with mu
  // chosen so the weights sum to one.
  const std::vector<double> w = squared_weights(instance);
  double s4 = 0.0;
  for (double x : w) {
    if (x > kNonzeroWeight) s4 += x * x;
  }
  const double wm = w[static_cast<std::size_t>(instance.target_outcome)];
  const int r_count = instance.pointer_count;
  auto sum_for = [&](double mu) {
    double total = 0.0;
    for (int r = 0; r < r_count; ++r) {
      total += std::max(0.0, (instance.chi[static_cast<std::size_t>(r)] * wm - mu) / s4);
    }
    return total;
  };
  double lo = -s4 - 1.0;
  double hi = wm + 1.0;  // sum_for(hi) = 0 < 1 <= sum_for(lo)
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (sum_for(mid) >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double mu = 0.5 * (lo + hi);
  report.constrained_u = Eigen::VectorXd::Zero(r_count);
  for (int r = 0; r < r_count; ++r) {
    report.constrained_u(r) =
        std::max(0.0, (instance.chi[static_cast<std::size_t>(r)] * wm - mu) / s4);
  }
  report.constrained_residual = (system.a * report.constrained_u - system.b).norm();
  return report;
}

std::string RegressionReport::to_record() const {
  std::ostringstream os;
  os << "coefficients=";
  for (std::size_t i = 0; i < instance.coefficients.size(); ++i) {
    if (i > 0) os << ',';
    os << format_double(instance.coefficients[i].real());
    if (instance.coefficients[i].imag() != 0.0) {
      os << '+' << format_double(instance.coefficients[i].imag()) << 'i';
    }
  }
  os << " chi=";
  for (std::size_t i = 0; i < instance.chi.size(); ++i) {
    if (i > 0) os << ',';
    os << format_double(instance.chi[i]);
  }
  os << " target=" << instance.target_outcome
     << " residual=" << format_double(unconstrained.residual)
     << " solvable=" << (unconstrained.solvable ? "true" : "false")
     << " constrained_residual=" << format_double(constrained_residual);
  return os.str();
}

}  // namespace measuretherm
