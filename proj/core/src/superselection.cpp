#include "measuretherm/superselection.hpp"

#include <cmath>
#include <sstream>

namespace measuretherm {

namespace {

RVector trapezoid_coefficients(const RVector& grid) {
  const Eigen::Index n = grid.size();
  if (n < 2) throw ConfigurationError("momentum grid needs at least two points");
  for (Eigen::Index i = 1; i < n; ++i) {
    if (grid(i) <= grid(i - 1)) throw ConfigurationError("momentum grid must be strictly increasing");
  }
  RVector q(n);
  q(0) = 0.5 * (grid(1) - grid(0));
  q(n - 1) = 0.5 * (grid(n - 1) - grid(n - 2));
  for (Eigen::Index i = 1; i + 1 < n; ++i) q(i) = 0.5 * (grid(i + 1) - grid(i - 1));
  return q;
}

}  // namespace

void SectorField::validate() const {
  const Eigen::Index n = momenta.size();
  if (weights.size() != n || quadrature.size() != n ||
      static_cast<Eigen::Index>(sector_states.size()) != n) {
    throw ConfigurationError("sector field arrays have inconsistent lengths");
  }
  if (weights.minCoeff() < 0.0) throw InvariantViolation("sector weights must be nonnegative");
  const double total = weights.dot(quadrature);
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "sector weights integrate to " << total << "; normalization off beyond 1e-10";
    throw InvariantViolation(os.str());
  }
  const Eigen::Index dim = eigenvalues.size();
  for (const CVector& s : sector_states) {
    if (s.size() != dim) throw ConfigurationError("sector states must share the outcome dimension");
  }
}

SectorField make_field(RVector momenta, RVector raw_weights,
                       const std::vector<Complex>& coefficients,
                       const std::vector<double>& eigenvalues) {
  if (coefficients.size() != eigenvalues.size()) {
    throw ConfigurationError("coefficient and eigenvalue counts differ");
  }
  SectorField field;
  field.momenta = std::move(momenta);
  field.quadrature = trapezoid_coefficients(field.momenta);
  const double total = raw_weights.dot(field.quadrature);
  if (total <= 0.0) throw ConfigurationError("sector weights must have positive total mass");
  field.weights = raw_weights / total;

  CVector psi(static_cast<Eigen::Index>(coefficients.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = coefficients[static_cast<std::size_t>(i)];
  StateVector check(psi);  // validates normalization
  field.sector_states.assign(static_cast<std::size_t>(field.momenta.size()), psi);
  field.eigenvalues = Eigen::Map<const RVector>(eigenvalues.data(),
                                                static_cast<Eigen::Index>(eigenvalues.size()));
  field.validate();
  return field;
}

SectorField make_gaussian_field(const std::vector<Complex>& coefficients,
                                const std::vector<double>& eigenvalues, double sigma_p,
                                int grid_points) {
  if (sigma_p <= 0.0) throw ConfigurationError("sigma_p must be positive");
  if (grid_points < 2) throw ConfigurationError("grid needs at least two points");
  // Span 9 sigma: the hard cutoff rings like w(span)/omega, so the span must
  // keep w(span) well below the 1e-12 late-time off-diagonal budget.
  RVector p = RVector::LinSpaced(grid_points, -9.0 * sigma_p, 9.0 * sigma_p);
  RVector w(grid_points);
  for (int i = 0; i < grid_points; ++i) w(i) = std::exp(-p(i) * p(i) / (2.0 * sigma_p * sigma_p));
  return make_field(std::move(p), std::move(w), coefficients, eigenvalues);
}

SectorField make_box_field(const std::vector<Complex>& coefficients,
                           const std::vector<double>& eigenvalues, double half_width,
                           int grid_points) {
  if (half_width <= 0.0) throw ConfigurationError("half_width must be positive");
  if (grid_points < 2) throw ConfigurationError("grid needs at least two points");
  RVector p = RVector::LinSpaced(grid_points, -half_width, half_width);
  RVector w = RVector::Ones(grid_points);
  return make_field(std::move(p), std::move(w), coefficients, eigenvalues);
}

SectorField evolve_sectors(const SectorField& field, double t) {
  field.validate();
  SectorField out = field;
  for (Eigen::Index ip = 0; ip < field.momenta.size(); ++ip) {
    CVector& s = out.sector_states[static_cast<std::size_t>(ip)];
    for (Eigen::Index n = 0; n < s.size(); ++n) {
      s(n) *= std::exp(Complex(0.0, t * field.eigenvalues(n) * field.momenta(ip)));
    }
  }
  return out;
}

Complex offdiagonal_kernel(const SectorField& field, int m, int n, double t) {
  if (m < 0 || n < 0 || m >= field.n_outcomes() || n >= field.n_outcomes()) {
    throw ConfigurationError("kernel outcome index out of range");
  }
  const double dx = field.eigenvalues(m) - field.eigenvalues(n);
  Complex k(0.0, 0.0);
  for (Eigen::Index i = 0; i < field.momenta.size(); ++i) {
    k += field.weights(i) * field.quadrature(i) *
         std::exp(Complex(0.0, t * dx * field.momenta(i)));
  }
  if (std::abs(k) > 1.0 + 1e-12) {
    throw InvariantViolation("kernel magnitude exceeds one beyond 1e-12");
  }
  return k;
}

DensityMatrix averaged_state(const SectorField& field) {
  field.validate();
  const Eigen::Index dim = field.n_outcomes();
  Matrix acc = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < field.momenta.size(); ++i) {
    const CVector& s = field.sector_states[static_cast<std::size_t>(i)];
    acc += (field.weights(i) * field.quadrature(i)) * (s * s.adjoint());
  }
  return DensityMatrix::trusted(std::move(acc));
}

DecayRecord decay_scan(const SectorField& field, const std::vector<double>& times) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] < times[i - 1]) throw ConfigurationError("scan times must be sorted ascending");
  }
  DecayRecord record;
  record.times = times;
  record.kernels.reserve(times.size());
  const Eigen::Index k = field.n_outcomes();
  for (double t : times) {
    Matrix values(k, k);
    for (Eigen::Index m = 0; m < k; ++m) {
      for (Eigen::Index n = 0; n < k; ++n) {
        values(m, n) = offdiagonal_kernel(field, static_cast<int>(m), static_cast<int>(n), t);
      }
    }
    record.kernels.push_back(std::move(values));
  }
  return record;
}

}  // namespace measuretherm
