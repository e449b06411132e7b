#include "measuretherm/random_states.hpp"

#include <cmath>

namespace measuretherm {

namespace {

Matrix ginibre(Eigen::Index dim, SplitMix64& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      g(i, j) = Complex(rng.normal(), rng.normal());
    }
  }
  return g;
}

Matrix unit_spectral_norm(Matrix h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double norm = std::max(std::abs(es.eigenvalues().minCoeff()),
                               std::abs(es.eigenvalues().maxCoeff()));
  if (norm > 0.0) h /= norm;
  return h;
}

}  // namespace

HermitianOperator random_hermitian(Eigen::Index dim, SplitMix64& rng) {
  const Matrix g = ginibre(dim, rng);
  return HermitianOperator(unit_spectral_norm(0.5 * (g + g.adjoint())));
}

HermitianOperator random_real_hermitian(Eigen::Index dim, SplitMix64& rng) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), 0.0);
  }
  return HermitianOperator(unit_spectral_norm(0.5 * (g + g.adjoint())));
}

HermitianOperator random_block_hermitian(const std::vector<Eigen::Index>& block_dims,
                                         SplitMix64& rng) {
  Eigen::Index total = 0;
  for (Eigen::Index d : block_dims) total += d;
  Matrix h = Matrix::Zero(total, total);
  Eigen::Index offset = 0;
  for (Eigen::Index d : block_dims) {
    const Matrix g = ginibre(d, rng);
    h.block(offset, offset, d, d) = 0.5 * (g + g.adjoint());
    offset += d;
  }
  return HermitianOperator(unit_spectral_norm(std::move(h)));
}

DensityMatrix random_density(Eigen::Index dim, SplitMix64& rng) {
  const Matrix g = ginibre(dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

std::vector<Complex> random_amplitudes(Eigen::Index count, SplitMix64& rng) {
  CVector v(count);
  for (Eigen::Index i = 0; i < count; ++i) v(i) = Complex(rng.normal(), rng.normal());
  v /= v.norm();
  return std::vector<Complex>(v.data(), v.data() + v.size());
}

std::vector<double> random_probabilities(Eigen::Index count, SplitMix64& rng) {
  std::vector<double> p(static_cast<std::size_t>(count));
  double total = 0.0;
  for (double& x : p) {
    x = rng.uniform();
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

DrivingProtocol random_protocol(SplitMix64& rng, const ProtocolBounds& bounds) {
  const Eigen::Index dim = rng.uniform_int(2, bounds.max_dimension);
  const int steps = static_cast<int>(rng.uniform_int(1, bounds.max_steps));
  DrivingProtocol protocol;
  protocol.step = 0.05;
  protocol.beta = rng.uniform(bounds.beta_min, bounds.beta_max);
  protocol.hamiltonians.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) protocol.hamiltonians.push_back(random_hermitian(dim, rng));
  return protocol;
}

DrivingProtocol random_block_protocol(SplitMix64& rng,
                                      const std::vector<Eigen::Index>& block_dims,
                                      int n_steps, double beta) {
  DrivingProtocol protocol;
  protocol.step = 0.05;
  protocol.beta = beta;
  protocol.hamiltonians.reserve(static_cast<std::size_t>(n_steps) + 1);
  for (int k = 0; k <= n_steps; ++k) {
    protocol.hamiltonians.push_back(random_block_hermitian(block_dims, rng));
  }
  return protocol;
}

}  // namespace measuretherm
