#pragma once

#include <string>
#include <vector>

#include "measuretherm/operators.hpp"

namespace measuretherm {

/// Memory with a direct-sum state space: block n (dimension d_n) stores
/// outcome n with probability p_n; block 0 is the standard (erased) state.
/// The standard block must be large enough to absorb the support of the
/// outcome mixture under a unitary embedding.
struct MemoryState {
  std::vector<Eigen::Index> block_dimensions;
  std::vector<DensityMatrix> blocks;
  std::vector<double> probabilities;
  double beta = 1.0;

  void validate() const;
  Eigen::Index total_dimension() const;
  Eigen::Index block_offset(std::size_t n) const;
  /// Sum_n p_n rho_n embedded block-diagonally in the full space.
  Matrix mixture() const;
};

/// -Sum p ln p in nats with 0 ln 0 = 0.
double shannon_entropy(const RVector& p);

/// Unitary carrying the support of the outcome mixture into block 0: the
/// mixture's eigenvectors map onto the leading block-0 axes, the remaining
/// basis completes the map.
Matrix default_embedding(const MemoryState& memory);

struct LandauerReport {
  double lhs = 0.0;  // Shannon entropy of the outcome probabilities
  double rhs = 0.0;  // S(rho_0') - Sum p_n S(rho_n)
  double difference = 0.0;
  bool holds = false;

  std::string to_record() const;
};

/// Erasure entropy bookkeeping over the block structure; the two sides agree
/// within 1e-10 whenever the embedding lands in block 0.
LandauerReport landauer_identity(const MemoryState& memory, const Matrix& embedding_unitary);

struct KleinReport {
  double cross_entropy = 0.0;  // -tr(rho_0' ln rho_can)
  double entropy = 0.0;        // S(rho_0')
  bool holds = false;

  std::string to_record() const;
};

/// Relative-entropy bound of the erased state against the block-0 canonical
/// state of the supplied Hamiltonian at the memory's beta.
KleinReport klein_bound(const MemoryState& memory, const Matrix& embedding_unitary,
                        const HermitianOperator& block0_hamiltonian);

}  // namespace measuretherm
