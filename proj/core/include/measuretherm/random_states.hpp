#pragma once

#include <vector>

#include "measuretherm/operators.hpp"
#include "measuretherm/rng.hpp"
#include "measuretherm/work.hpp"

namespace measuretherm {

/// Hermitian matrix with Gaussian entries, rescaled to unit spectral norm.
HermitianOperator random_hermitian(Eigen::Index dim, SplitMix64& rng);

/// Same construction restricted to real entries (time-reversal symmetric).
HermitianOperator random_real_hermitian(Eigen::Index dim, SplitMix64& rng);

/// Block-diagonal Hermitian over the given block splitting, unit spectral norm.
HermitianOperator random_block_hermitian(const std::vector<Eigen::Index>& block_dims,
                                         SplitMix64& rng);

/// Full-rank random state G G^dagger / tr(G G^dagger).
DensityMatrix random_density(Eigen::Index dim, SplitMix64& rng);

/// Normalized random complex amplitudes.
std::vector<Complex> random_amplitudes(Eigen::Index count, SplitMix64& rng);

/// Uniform random probability vector.
std::vector<double> random_probabilities(Eigen::Index count, SplitMix64& rng);

struct ProtocolBounds {
  Eigen::Index max_dimension = 8;
  int max_steps = 200;
  double beta_min = 0.1;
  double beta_max = 5.0;
};

/// Random piecewise-constant protocol within the bounds; the step is fixed
/// at 0.05 natural time units.
DrivingProtocol random_protocol(SplitMix64& rng, const ProtocolBounds& bounds = {});

/// Random protocol whose Hamiltonians are block-diagonal in the given
/// splitting (they commute with the matching block projector family).
DrivingProtocol random_block_protocol(SplitMix64& rng,
                                      const std::vector<Eigen::Index>& block_dims,
                                      int n_steps, double beta);

}  // namespace measuretherm
