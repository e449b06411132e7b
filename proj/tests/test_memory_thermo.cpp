#include <doctest.h>

#include <cmath>

#include "measuretherm/memory_thermo.hpp"
#include "measuretherm/random_states.hpp"
#include "measuretherm/work.hpp"

using namespace measuretherm;

namespace {

MemoryState two_record_memory(SplitMix64& rng, double p1) {
  MemoryState memory;
  memory.block_dimensions = {4, 2, 2};
  memory.beta = 1.0;
  memory.blocks.push_back(random_density(4, rng));
  memory.blocks.push_back(random_density(2, rng));
  memory.blocks.push_back(random_density(2, rng));
  memory.probabilities = {0.0, p1, 1.0 - p1};
  return memory;
}

RVector probs(std::initializer_list<double> values) {
  RVector p(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) p(i++) = v;
  return p;
}

}  // namespace

TEST_SUITE("memory_thermo") {

TEST_CASE("Shannon entropy values and Schur concavity spot checks") {
  CHECK(shannon_entropy(probs({1.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(shannon_entropy(probs({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const double oracle = -0.25 * std::log(0.25) - 0.75 * std::log(0.75);
  CHECK(shannon_entropy(probs({0.25, 0.75})) == doctest::Approx(oracle).epsilon(1e-15));

  // The uniform distribution majorizes-least: it maximizes the entropy.
  const double uniform3 = shannon_entropy(probs({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  CHECK(uniform3 >= shannon_entropy(probs({0.5, 0.3, 0.2})));
  CHECK(uniform3 >= shannon_entropy(probs({0.9, 0.05, 0.05})));
  CHECK_THROWS_AS(shannon_entropy(probs({0.5, 0.2})), ConfigurationError);
}

TEST_CASE("single-block memory: both sides vanish") {
  SplitMix64 rng(301);
  MemoryState memory;
  memory.block_dimensions = {3};
  memory.beta = 1.0;
  CVector pure = CVector::Zero(3);
  pure(1) = 1.0;
  memory.blocks.push_back(DensityMatrix::pure(pure));
  memory.probabilities = {1.0};
  const LandauerReport report = landauer_identity(memory, default_embedding(memory));
  CHECK(report.lhs == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(report.rhs == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("two pure one-dimensional records erase to exactly ln 2") {
  MemoryState memory;
  memory.block_dimensions = {2, 1, 1};
  memory.beta = 1.0;
  Matrix standard = Matrix::Zero(2, 2);
  standard(0, 0) = 1.0;
  memory.blocks.push_back(DensityMatrix(standard));
  memory.blocks.push_back(DensityMatrix(Matrix::Ones(1, 1)));
  memory.blocks.push_back(DensityMatrix(Matrix::Ones(1, 1)));
  memory.probabilities = {0.0, 0.5, 0.5};
  const LandauerReport report = landauer_identity(memory, default_embedding(memory));
  CHECK(report.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(report.rhs == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(std::abs(report.difference) < 1e-12);
}

TEST_CASE("identity holds for random mixed-block memories") {
  SplitMix64 rng(307);
  for (int rep = 0; rep < 50; ++rep) {
    const MemoryState memory = two_record_memory(rng, rng.uniform(0.05, 0.95));
    const LandauerReport report = landauer_identity(memory, default_embedding(memory));
    CHECK(std::abs(report.difference) < 1e-10);

    // Independent block-spectrum oracle: the entropy of a block-diagonal
    // mixture is the label entropy plus the weighted block entropies.
    Eigen::SelfAdjointEigenSolver<Matrix> es(memory.mixture(), Eigen::EigenvaluesOnly);
    double mixture_entropy = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double lambda = es.eigenvalues()(i);
      if (lambda > 0.0) mixture_entropy -= lambda * std::log(lambda);
    }
    double expected = mixture_entropy;
    for (std::size_t n = 0; n < memory.blocks.size(); ++n) {
      if (memory.probabilities[n] > 0.0) {
        expected -= memory.probabilities[n] * von_neumann_entropy(memory.blocks[n]);
      }
    }
    CHECK(report.rhs == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("embedding that misses the standard block is rejected") {
  SplitMix64 rng(311);
  const MemoryState memory = two_record_memory(rng, 0.5);
  const Eigen::Index d = memory.total_dimension();
  CHECK_THROWS_AS(landauer_identity(memory, Matrix::Identity(d, d)), ConfigurationError);
  CHECK_THROWS_AS(landauer_identity(memory, 0.5 * Matrix::Identity(d, d)), InvariantViolation);
}

TEST_CASE("memory validation: standard block must absorb the support") {
  SplitMix64 rng(313);
  MemoryState small;
  small.block_dimensions = {1, 2};
  small.beta = 1.0;
  small.blocks.push_back(DensityMatrix(Matrix::Ones(1, 1)));
  small.blocks.push_back(random_density(2, rng));  // full rank 2 > d0 = 1
  small.probabilities = {0.0, 1.0};
  CHECK_THROWS_AS(small.validate(), ConfigurationError);
}

TEST_CASE("cross-entropy bound: saturation, random draws, infinite temperature") {
  SplitMix64 rng(317);
  const HermitianOperator h = random_hermitian(3, rng);
  MemoryState saturated;
  saturated.block_dimensions = {3};
  saturated.beta = 1.7;
  saturated.blocks.push_back(DensityMatrix(canonical_state(h, 1.7)));
  saturated.probabilities = {1.0};
  const KleinReport equal = klein_bound(saturated, Matrix::Identity(3, 3), h);
  CHECK(equal.holds);
  CHECK(std::abs(equal.cross_entropy - equal.entropy) < 1e-10);

  for (int rep = 0; rep < 200; ++rep) {
    const MemoryState memory = two_record_memory(rng, rng.uniform(0.05, 0.95));
    const KleinReport report =
        klein_bound(memory, default_embedding(memory), random_hermitian(4, rng));
    CHECK(report.holds);
    CHECK(report.cross_entropy >= report.entropy - 1e-10);
  }

  // Pure erased state against the infinite-temperature canonical state.
  MemoryState pure_memory;
  pure_memory.block_dimensions = {4, 1};
  pure_memory.beta = 0.0;
  CVector e0 = CVector::Zero(4);
  e0(0) = 1.0;
  pure_memory.blocks.push_back(DensityMatrix::pure(e0));
  pure_memory.blocks.push_back(DensityMatrix(Matrix::Ones(1, 1)));
  pure_memory.probabilities = {1.0, 0.0};
  const KleinReport flat = klein_bound(pure_memory, Matrix::Identity(5, 5),
                                       HermitianOperator(Matrix::Identity(4, 4)));
  CHECK(flat.cross_entropy == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(flat.entropy == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat.holds);
}

TEST_CASE("reports serialize their fields") {
  SplitMix64 rng(331);
  const MemoryState memory = two_record_memory(rng, 0.4);
  const Matrix u = default_embedding(memory);
  CHECK(landauer_identity(memory, u).to_record().find("holds=true") != std::string::npos);
  CHECK(klein_bound(memory, u, random_hermitian(4, rng)).to_record().find("cross_entropy=") !=
        std::string::npos);
}

}  // TEST_SUITE
