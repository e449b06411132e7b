#include "measuretherm/operators.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <sstream>
#include <utility>

namespace measuretherm {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": matrix must be square and non-empty, got " << m.rows() << "x"
       << m.cols();
    throw ConfigurationError(os.str());
  }
}

}  // namespace

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Matrix gram = m.adjoint() * m;
  return (gram - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

StateVector::StateVector(CVector amplitudes, bool require_normalized)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ConfigurationError("state vector is empty");
  if (require_normalized) {
    const double sq = amplitudes_.squaredNorm();
    if (std::abs(sq - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "state vector squared norm " << sq << " deviates from 1 beyond 1e-12";
      throw InvariantViolation(os.str());
    }
  }
}

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "HermitianOperator");
  if (!is_hermitian(entries_)) {
    throw InvariantViolation("operator entries do not equal their conjugate transpose within 1e-12");
  }
}

DensityMatrix::DensityMatrix(Matrix entries, double nominal_trace)
    : entries_(std::move(entries)), nominal_trace_(nominal_trace) {
  check();
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  StateVector sv(psi);  // validates normalization
  return DensityMatrix(psi * psi.adjoint(), 1.0);
}

DensityMatrix DensityMatrix::trusted(Matrix entries, double nominal_trace) {
  require_square(entries, "DensityMatrix");
  if (!is_hermitian(entries)) {
    throw InvariantViolation("density matrix is not Hermitian within 1e-12");
  }
  if (std::abs(entries.trace().real() - nominal_trace) > kTraceTol) {
    throw InvariantViolation("density matrix trace deviates from its nominal trace beyond 1e-10");
  }
  DensityMatrix rho;
  rho.entries_ = std::move(entries);
  rho.nominal_trace_ = nominal_trace;
  return rho;
}

void DensityMatrix::check() const {
  require_square(entries_, "DensityMatrix");
  if (!is_hermitian(entries_)) {
    throw InvariantViolation("density matrix is not Hermitian within 1e-12");
  }
  const double tr = entries_.trace().real();
  if (std::abs(tr - nominal_trace_) > kTraceTol) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " deviates from nominal trace "
       << nominal_trace_ << " beyond 1e-10";
    throw InvariantViolation(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenvalueFloor) {
    std::ostringstream os;
    os << "density matrix eigenvalue " << es.eigenvalues().minCoeff()
       << " below the -1e-10 floor";
    throw InvariantViolation(os.str());
  }
}

ProjectorFamily::ProjectorFamily(std::vector<Matrix> projectors,
                                 std::vector<std::string> labels)
    : projectors_(std::move(projectors)), labels_(std::move(labels)) {
  if (projectors_.empty()) throw ConfigurationError("projector family is empty");
  const Eigen::Index dim = projectors_.front().rows();
  for (const Matrix& p : projectors_) {
    require_square(p, "ProjectorFamily");
    if (p.rows() != dim) throw ConfigurationError("projector family members have mixed dimensions");
    if (!is_hermitian(p)) throw InvariantViolation("projector is not Hermitian within 1e-12");
    if (((p * p) - p).cwiseAbs().maxCoeff() > kProjectorTol) {
      throw InvariantViolation("projector is not idempotent within 1e-10");
    }
  }
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    sum += projectors_[i];
    for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
      if ((projectors_[i] * projectors_[j]).cwiseAbs().maxCoeff() > kProjectorTol) {
        throw InvariantViolation("projector family members are not pairwise orthogonal within 1e-10");
      }
    }
  }
  if ((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > kProjectorTol) {
    throw InvariantViolation("projector family does not sum to the identity within 1e-10");
  }
  if (labels_.empty()) {
    labels_.reserve(projectors_.size());
    for (std::size_t i = 0; i < projectors_.size(); ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != projectors_.size()) {
    throw ConfigurationError("projector family label count does not match projector count");
  }
}

ProjectorFamily ProjectorFamily::computational_basis(Eigen::Index dim) {
  std::vector<Matrix> ps;
  ps.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    Matrix p = Matrix::Zero(dim, dim);
    p(i, i) = 1.0;
    ps.push_back(std::move(p));
  }
  return ProjectorFamily(std::move(ps));
}

ProjectorFamily ProjectorFamily::blocks(const std::vector<Eigen::Index>& block_dims) {
  Eigen::Index dim = 0;
  for (Eigen::Index d : block_dims) {
    if (d <= 0) throw ConfigurationError("block dimension must be positive");
    dim += d;
  }
  std::vector<Matrix> ps;
  Eigen::Index offset = 0;
  for (Eigen::Index d : block_dims) {
    Matrix p = Matrix::Zero(dim, dim);
    p.block(offset, offset, d, d) = Matrix::Identity(d, d);
    ps.push_back(std::move(p));
    offset += d;
  }
  return ProjectorFamily(std::move(ps));
}

ProjectorFamily ProjectorFamily::eigenbasis(const HermitianOperator& observable,
                                            double degeneracy_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(observable.matrix());
  const RVector evals = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  std::vector<Matrix> ps;
  std::vector<std::string> labels;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= evals.size(); ++i) {
    if (i == evals.size() || evals(i) - evals(i - 1) > degeneracy_tol) {
      const Eigen::Index count = i - start;
      const Matrix block = v.middleCols(start, count);
      ps.push_back(block * block.adjoint());
      labels.push_back(std::to_string(evals.segment(start, count).mean()));
      start = i;
    }
  }
  return ProjectorFamily(std::move(ps), std::move(labels));
}

ProjectorFamily ProjectorFamily::embed(Eigen::Index left_dim, Eigen::Index right_dim) const {
  if (left_dim < 1 || right_dim < 1) throw ConfigurationError("embedding dimensions must be positive");
  std::vector<Matrix> ps;
  ps.reserve(projectors_.size());
  const Matrix il = Matrix::Identity(left_dim, left_dim);
  const Matrix ir = Matrix::Identity(right_dim, right_dim);
  for (const Matrix& p : projectors_) {
    ps.push_back(tensor_product(tensor_product(il, p), ir));
  }
  return ProjectorFamily(std::move(ps), labels_);
}

Superoperator Superoperator::dephasing(ProjectorFamily family) {
  return Superoperator{
      Kind::Dephasing,
      [family = std::move(family)](const DensityMatrix& rho) { return dephase(rho, family); }};
}

Superoperator Superoperator::unitary_conjugation(Matrix u) {
  if (!is_unitary(u)) throw InvariantViolation("conjugation matrix is not unitary within 1e-10");
  return Superoperator{Kind::UnitaryConjugation, [u = std::move(u)](const DensityMatrix& rho) {
                         return DensityMatrix::trusted(u * rho.entries() * u.adjoint(),
                                                       rho.nominal_trace());
                       }};
}

Superoperator Superoperator::composed(Superoperator first, Superoperator second) {
  return Superoperator{Kind::Composition,
                       [first = std::move(first), second = std::move(second)](
                           const DensityMatrix& rho) { return second(first(rho)); }};
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  if (a.size() == 0 || b.size() == 0) throw ConfigurationError("tensor factors must be non-empty");
  return Eigen::kroneckerProduct(a, b).eval();
}

CVector tensor_product(const CVector& a, const CVector& b) {
  if (a.size() == 0 || b.size() == 0) throw ConfigurationError("tensor factors must be non-empty");
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix partial_trace_matrix(const Matrix& m, const std::vector<Eigen::Index>& dims,
                            std::size_t keep) {
  require_square(m, "partial_trace");
  if (dims.empty() || keep >= dims.size()) {
    throw ConfigurationError("partial_trace: keep index outside subsystem list");
  }
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) {
    if (d <= 0) throw ConfigurationError("partial_trace: subsystem dimensions must be positive");
    total *= d;
  }
  if (total != m.rows()) {
    std::ostringstream os;
    os << "partial_trace: product of subsystem dimensions " << total
       << " does not match matrix dimension " << m.rows();
    throw ConfigurationError(os.str());
  }

  const std::size_t n = dims.size();
  std::vector<Eigen::Index> stride(n, 1);
  for (std::size_t i = n - 1; i-- > 0;) stride[i] = stride[i + 1] * dims[i + 1];

  const Eigen::Index dk = dims[keep];
  const Eigen::Index rest = total / dk;
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < rest; ++r) {
    Eigen::Index base = 0;
    Eigen::Index rr = r;
    for (std::size_t i = n; i-- > 0;) {
      if (i == keep) continue;
      base += (rr % dims[i]) * stride[i];
      rr /= dims[i];
    }
    for (Eigen::Index a = 0; a < dk; ++a) {
      for (Eigen::Index b = 0; b < dk; ++b) {
        out(a, b) += m(base + a * stride[keep], base + b * stride[keep]);
      }
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Eigen::Index>& dims,
                            std::size_t keep) {
  return DensityMatrix(partial_trace_matrix(rho.entries(), dims, keep), rho.nominal_trace());
}

Matrix dephase_matrix(const Matrix& m, const ProjectorFamily& family) {
  require_square(m, "dephase");
  if (family.dimension() != m.rows()) {
    throw InvariantViolation("projector family is not complete on the operator's space");
  }
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < family.size(); ++i) {
    out += family.projector(i) * m * family.projector(i);
  }
  return out;
}

DensityMatrix dephase(const DensityMatrix& rho, const ProjectorFamily& family) {
  return DensityMatrix::trusted(dephase_matrix(rho.entries(), family), rho.nominal_trace());
}

DensityMatrix unitary_evolve(const DensityMatrix& rho, const HermitianOperator& h, double dt) {
  if (h.dimension() != rho.dimension()) {
    throw ConfigurationError("unitary_evolve: operator and state dimensions differ");
  }
  const Matrix u = evolution_operator(h, dt);
  return DensityMatrix::trusted(u * rho.entries() * u.adjoint(), rho.nominal_trace());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-8) {
    throw InvariantViolation("von Neumann entropy requires a unit-trace state");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lambda = es.eigenvalues()(i);
    if (lambda < -1e-8) {
      std::ostringstream os;
      os << "eigenvalue " << lambda << " below -1e-8 in entropy evaluation";
      throw InvariantViolation(os.str());
    }
    if (lambda <= 0.0) continue;  // rounding noise clipped to zero
    s -= lambda * std::log(lambda);
  }
  return s;
}

RVector born_probabilities(const DensityMatrix& rho, const ProjectorFamily& family) {
  if (family.dimension() != rho.dimension()) {
    throw InvariantViolation("projector family is not complete on the state's space");
  }
  RVector p(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    p(static_cast<Eigen::Index>(i)) = (family.projector(i) * rho.entries()).trace().real();
    if (p(static_cast<Eigen::Index>(i)) < -1e-12) {
      throw InvariantViolation("Born probability below the -1e-12 floor");
    }
  }
  if (std::abs(p.sum() - rho.trace()) > kTraceTol) {
    throw InvariantViolation("Born probabilities do not sum to the state's trace within 1e-10");
  }
  return p;
}

Matrix hermitian_exponential(const HermitianOperator& h, Complex scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  CVector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(scale * es.eigenvalues()(i));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix evolution_operator(const HermitianOperator& h, double dt) {
  return hermitian_exponential(h, Complex(0.0, -dt));
}

}  // namespace measuretherm
