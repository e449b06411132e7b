#include "measuretherm/memory_thermo.hpp"

#include <cmath>
#include <sstream>

#include "measuretherm/report.hpp"

namespace measuretherm {

namespace {

constexpr double kSupportTol = 1e-12;
constexpr double kEmbeddingTol = 1e-10;

Eigen::Index support_rank(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries(), Eigen::EigenvaluesOnly);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > kSupportTol) ++rank;
  }
  return rank;
}

double entropy_of_matrix(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda <= 0.0) continue;
    s -= lambda * std::log(lambda);
  }
  return s;
}

double weight_outside_block0(const Matrix& rho, Eigen::Index d0) {
  double outside = 0.0;
  for (Eigen::Index i = d0; i < rho.rows(); ++i) outside += rho(i, i).real();
  return outside;
}

Matrix embedded_erased_state(const MemoryState& memory, const Matrix& u) {
  if (u.rows() != memory.total_dimension() || u.cols() != memory.total_dimension()) {
    throw ConfigurationError("embedding unitary dimension does not match the memory space");
  }
  if (!is_unitary(u)) throw InvariantViolation("embedding matrix is not unitary within 1e-10");
  Matrix erased = u * memory.mixture() * u.adjoint();
  const double outside = weight_outside_block0(erased, memory.block_dimensions.front());
  if (outside >= kEmbeddingTol) {
    std::ostringstream os;
    os << "embedding leaves weight " << outside << " outside the standard block";
    throw ConfigurationError(os.str());
  }
  return erased;
}

}  // namespace

void MemoryState::validate() const {
  const std::size_t k = block_dimensions.size();
  if (k == 0) throw ConfigurationError("memory needs at least the standard block");
  if (blocks.size() != k || probabilities.size() != k) {
    throw ConfigurationError("memory blocks, dimensions, and probabilities must align");
  }
  double total = 0.0;
  Eigen::Index needed = 0;
  for (std::size_t n = 0; n < k; ++n) {
    if (block_dimensions[n] < 1) throw ConfigurationError("block dimensions must be positive");
    if (blocks[n].dimension() != block_dimensions[n]) {
      throw ConfigurationError("block state dimension does not match its declared block");
    }
    if (probabilities[n] < 0.0) throw ConfigurationError("block probabilities must be nonnegative");
    total += probabilities[n];
    if (probabilities[n] > 0.0) needed += support_rank(blocks[n]);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigurationError("block probabilities must sum to one within 1e-12");
  }
  if (block_dimensions.front() < needed) {
    std::ostringstream os;
    os << "standard block dimension " << block_dimensions.front()
       << " cannot absorb the mixture support of rank " << needed;
    throw ConfigurationError(os.str());
  }
}

Eigen::Index MemoryState::total_dimension() const {
  Eigen::Index d = 0;
  for (Eigen::Index b : block_dimensions) d += b;
  return d;
}

Eigen::Index MemoryState::block_offset(std::size_t n) const {
  Eigen::Index off = 0;
  for (std::size_t i = 0; i < n; ++i) off += block_dimensions[i];
  return off;
}

Matrix MemoryState::mixture() const {
  const Eigen::Index d = total_dimension();
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t n = 0; n < blocks.size(); ++n) {
    const Eigen::Index off = block_offset(n);
    m.block(off, off, block_dimensions[n], block_dimensions[n]) +=
        probabilities[n] * blocks[n].entries();
  }
  return m;
}

double shannon_entropy(const RVector& p) {
  double total = 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < 0.0) throw ConfigurationError("probabilities must be nonnegative");
    total += p(i);
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw ConfigurationError("probabilities must sum to one");
  }
  return h;
}

Matrix default_embedding(const MemoryState& memory) {
  memory.validate();
  const Eigen::Index d = memory.total_dimension();
  Eigen::SelfAdjointEigenSolver<Matrix> es(memory.mixture());

  // Eigenvectors sorted by descending eigenvalue: support first.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = d - 1 - i;

  Matrix u = Matrix::Zero(d, d);
  for (Eigen::Index slot = 0; slot < d; ++slot) {
    const Eigen::Index source = order[static_cast<std::size_t>(slot)];
    u.row(slot) = es.eigenvectors().col(source).adjoint();
  }
  return u;
}

LandauerReport landauer_identity(const MemoryState& memory, const Matrix& embedding_unitary) {
  memory.validate();
  const Matrix erased = embedded_erased_state(memory, embedding_unitary);

  LandauerReport report;
  report.lhs = shannon_entropy(Eigen::Map<const RVector>(
      memory.probabilities.data(), static_cast<Eigen::Index>(memory.probabilities.size())));
  double weighted_block_entropy = 0.0;
  for (std::size_t n = 0; n < memory.blocks.size(); ++n) {
    if (memory.probabilities[n] == 0.0) continue;
    weighted_block_entropy += memory.probabilities[n] * von_neumann_entropy(memory.blocks[n]);
  }
  report.rhs = entropy_of_matrix(erased) - weighted_block_entropy;
  report.difference = report.lhs - report.rhs;
  report.holds = std::abs(report.difference) < 1e-10;
  if (!report.holds) {
    std::ostringstream os;
    os << "erasure identity violated: lhs " << report.lhs << " vs rhs " << report.rhs;
    throw InvariantViolation(os.str());
  }
  return report;
}

KleinReport klein_bound(const MemoryState& memory, const Matrix& embedding_unitary,
                        const HermitianOperator& block0_hamiltonian) {
  memory.validate();
  const Eigen::Index d0 = memory.block_dimensions.front();
  if (block0_hamiltonian.dimension() != d0) {
    throw ConfigurationError("block-0 Hamiltonian dimension does not match the standard block");
  }
  const Matrix erased = embedded_erased_state(memory, embedding_unitary);
  const Matrix erased0 = erased.topLeftCorner(d0, d0);

  // ln rho_can = -beta H - ln Z; the trace against it is evaluated in that
  // closed form. Rank deficiency shows up as an underflowed weight.
  const double beta = memory.beta;
  Eigen::SelfAdjointEigenSolver<Matrix> es(block0_hamiltonian.matrix(), Eigen::EigenvaluesOnly);
  const double span = beta * (es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff());
  if (std::exp(-span) == 0.0) {
    throw ConfigurationError("block-0 canonical state is numerically rank deficient");
  }
  double m = -beta * es.eigenvalues().minCoeff();
  double z = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    z += std::exp(-beta * es.eigenvalues()(i) - m);
  }
  const double log_z = m + std::log(z);

  KleinReport report;
  report.cross_entropy =
      beta * (erased0 * block0_hamiltonian.matrix()).trace().real() +
      log_z * erased0.trace().real();
  report.entropy = entropy_of_matrix(erased);
  report.holds = report.cross_entropy >= report.entropy - 1e-10;
  return report;
}

std::string LandauerReport::to_record() const {
  std::ostringstream os;
  os << "lhs=" << format_double(lhs) << " rhs=" << format_double(rhs)
     << " difference=" << format_double(difference) << " holds=" << (holds ? "true" : "false");
  return os.str();
}

std::string KleinReport::to_record() const {
  std::ostringstream os;
  os << "cross_entropy=" << format_double(cross_entropy) << " entropy=" << format_double(entropy)
     << " holds=" << (holds ? "true" : "false");
  return os.str();
}

}  // namespace measuretherm
