#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "measuretherm/errors.hpp"

namespace measuretherm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Shared numerical tolerances of the dense operator algebra. Natural units
// (hbar = k_B = 1) are assumed everywhere.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kProjectorTol = 1e-10;

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
bool is_unitary(const Matrix& m, double tol = 1e-10);

/// Normalized ket on a finite-dimensional space.
class StateVector {
 public:
  /// When `require_normalized` the squared norm must be 1 within 1e-12.
  explicit StateVector(CVector amplitudes, bool require_normalized = true);

  const CVector& amplitudes() const { return amplitudes_; }
  Eigen::Index dimension() const { return amplitudes_.size(); }

 private:
  CVector amplitudes_;
};

/// Complex square matrix equal to its conjugate transpose within 1e-12.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);

  const Matrix& matrix() const { return entries_; }
  Eigen::Index dimension() const { return entries_.rows(); }

 private:
  Matrix entries_;
};

/// Density matrix with an explicit nominal trace. The trace is not forced to
/// one: entropy-transferred states carry nominal_trace = exp(-sigma).
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries, double nominal_trace = 1.0);

  static DensityMatrix pure(const CVector& psi);
  /// Skips the eigenvalue scan; for internal steps that preserve positivity
  /// by construction. Hermiticity and the trace are still checked.
  static DensityMatrix trusted(Matrix entries, double nominal_trace = 1.0);

  const Matrix& entries() const { return entries_; }
  Eigen::Index dimension() const { return entries_.rows(); }
  double nominal_trace() const { return nominal_trace_; }

  double trace() const { return entries_.trace().real(); }
  double purity() const { return (entries_ * entries_).trace().real(); }

  /// Full invariant validation: hermiticity 1e-12, eigenvalues >= -1e-10,
  /// trace within 1e-10 of the nominal trace.
  void check() const;

 private:
  DensityMatrix() = default;
  Matrix entries_;
  double nominal_trace_ = 1.0;
};

/// Complete orthogonal projector family {P(y)}: each member idempotent,
/// pairwise orthogonal, summing to the identity (all within 1e-10).
class ProjectorFamily {
 public:
  explicit ProjectorFamily(std::vector<Matrix> projectors,
                           std::vector<std::string> labels = {});

  static ProjectorFamily computational_basis(Eigen::Index dim);
  static ProjectorFamily blocks(const std::vector<Eigen::Index>& block_dims);
  /// Spectral projectors of an observable; eigenvalues closer than
  /// `degeneracy_tol` share a projector.
  static ProjectorFamily eigenbasis(const HermitianOperator& observable,
                                    double degeneracy_tol = 1e-9);

  /// P(y) -> 1_left (x) P(y) (x) 1_right on an enlarged product space.
  ProjectorFamily embed(Eigen::Index left_dim, Eigen::Index right_dim) const;

  std::size_t size() const { return projectors_.size(); }
  const Matrix& projector(std::size_t i) const { return projectors_[i]; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  Eigen::Index dimension() const { return projectors_.front().rows(); }

 private:
  std::vector<Matrix> projectors_;
  std::vector<std::string> labels_;
};

/// Linear map on density matrices. Dephasing and unitary conjugation are
/// trace-preserving on trace-one inputs within 1e-10.
struct Superoperator {
  enum class Kind { Dephasing, UnitaryConjugation, Composition };

  Kind kind;
  std::function<DensityMatrix(const DensityMatrix&)> action;

  DensityMatrix operator()(const DensityMatrix& rho) const { return action(rho); }

  static Superoperator dephasing(ProjectorFamily family);
  static Superoperator unitary_conjugation(Matrix u);
  /// Applies `first`, then `second`.
  static Superoperator composed(Superoperator first, Superoperator second);
};

/// Kronecker product with the left factor as the slow index.
Matrix tensor_product(const Matrix& a, const Matrix& b);
CVector tensor_product(const CVector& a, const CVector& b);

/// Partial trace over all subsystems except `keep`. `dims` lists the
/// subsystem dimensions in slow-to-fast Kronecker order.
Matrix partial_trace_matrix(const Matrix& m, const std::vector<Eigen::Index>& dims,
                            std::size_t keep);
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<Eigen::Index>& dims, std::size_t keep);

/// Sum_y P(y) m P(y).
Matrix dephase_matrix(const Matrix& m, const ProjectorFamily& family);
DensityMatrix dephase(const DensityMatrix& rho, const ProjectorFamily& family);

/// exp(-i H dt) rho exp(+i H dt) via eigendecomposition of H.
DensityMatrix unitary_evolve(const DensityMatrix& rho, const HermitianOperator& h,
                             double dt);

/// -Sum lambda ln lambda in nats, with 0 ln 0 = 0. Eigenvalues in
/// [-1e-8, 0) are clipped to zero; anything more negative is an error.
double von_neumann_entropy(const DensityMatrix& rho);

/// p(y) = tr(P(y) rho).
RVector born_probabilities(const DensityMatrix& rho, const ProjectorFamily& family);

/// V exp(scale * Lambda) V^dagger for a Hermitian input.
Matrix hermitian_exponential(const HermitianOperator& h, Complex scale);
/// exp(-i H dt).
Matrix evolution_operator(const HermitianOperator& h, double dt);

}  // namespace measuretherm
