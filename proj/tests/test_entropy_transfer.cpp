#include <doctest.h>

#include <cmath>

#include "measuretherm/entropy_transfer.hpp"
#include "measuretherm/random_states.hpp"

using namespace measuretherm;

TEST_SUITE("entropy_transfer") {

TEST_CASE("block-diagonal inputs reduce to the plain partial trace") {
  SplitMix64 rng(11);
  const ProjectorFamily family = ProjectorFamily::computational_basis(2);
  // Build a state of S (x) M that is already family-diagonal on S.
  const DensityMatrix rho_m0 = random_density(3, rng);
  const DensityMatrix rho_m1 = random_density(3, rng);
  Matrix joint = Matrix::Zero(6, 6);
  joint.block(0, 0, 3, 3) = 0.4 * rho_m0.entries();
  joint.block(3, 3, 3, 3) = 0.6 * rho_m1.entries();
  const DensityMatrix rho(joint);
  for (std::size_t keep : {0u, 1u}) {
    const DensityMatrix reduced = reduced_state_no_transfer(rho, family, keep);
    const DensityMatrix plain = partial_trace(rho, {2, 3}, keep);
    CHECK((reduced.entries() - plain.entries()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("balanced superposition with a trivial partner: hand-computed reduction") {
  CVector plus(2);
  plus << Complex(M_SQRT1_2, 0.0), Complex(M_SQRT1_2, 0.0);
  const DensityMatrix rho = DensityMatrix::pure(plus);  // M is one-dimensional
  const ProjectorFamily family = ProjectorFamily::computational_basis(2);
  const DensityMatrix reduced = reduced_state_no_transfer(rho, family, 0);
  CHECK(reduced.entries()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(reduced.entries()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(reduced.entries()(0, 1).real() ==
        doctest::Approx(std::exp(-1.0) * 0.5).epsilon(1e-13));
}

TEST_CASE("reduction yields a unit-trace valid state on random inputs") {
  SplitMix64 rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index ds = rng.uniform_int(2, 4);
    const Eigen::Index dm = rng.uniform_int(2, 3);
    const DensityMatrix rho = random_density(ds * dm, rng);
    const ProjectorFamily family = ProjectorFamily::computational_basis(ds);
    for (std::size_t keep : {0u, 1u}) {
      const DensityMatrix reduced = reduced_state_no_transfer(rho, family, keep);
      CHECK(std::abs(reduced.trace() - 1.0) < 1e-10);
      CHECK_NOTHROW(reduced.check());
    }
  }
  const DensityMatrix rho = random_density(5, rng);
  CHECK_THROWS_AS(reduced_state_no_transfer(rho, ProjectorFamily::computational_basis(2), 0),
                  ConfigurationError);
}

TEST_CASE("transfer rescales the trace by exp(-sigma)") {
  SplitMix64 rng(17);
  const DensityMatrix rho = random_density(3, rng);
  const TransferredState unchanged = apply_transfer(rho, 0.0);
  CHECK((unchanged.rho.entries() - rho.entries()).cwiseAbs().maxCoeff() == 0.0);
  const TransferredState gained = apply_transfer(rho, -1.0);
  CHECK(gained.rho.trace() == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(gained.rho.nominal_trace() == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  const TransferredState lost = apply_transfer(rho, 1.0);
  CHECK(lost.rho.trace() == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("starred observables keep expectation values well-defined") {
  SplitMix64 rng(19);
  const HermitianOperator obs = random_hermitian(3, rng);
  CHECK((star_observable(obs, 0.0).matrix() - obs.matrix()).cwiseAbs().maxCoeff() == 0.0);

  for (int rep = 0; rep < 50; ++rep) {
    const DensityMatrix rho0 = random_density(3, rng);
    const HermitianOperator o = random_hermitian(3, rng);
    const double sigma = rng.uniform(-2.5, 2.5);
    const double direct = (o.matrix() * rho0.entries()).trace().real();
    const TransferredState transferred = apply_transfer(rho0, sigma);
    const double starred =
        (star_observable(o, sigma).matrix() * transferred.rho.entries()).trace().real();
    CHECK(std::abs(starred - direct) < 1e-12);

    const HermitianOperator unit(Matrix::Identity(3, 3));
    const double unit_value =
        (star_observable(unit, sigma).matrix() * transferred.rho.entries()).trace().real();
    CHECK(std::abs(unit_value - 1.0) < 1e-12);
  }
  const TransferredState scaled = apply_transfer(random_density(3, rng), -1.0);
  CHECK((star_observable(HermitianOperator(Matrix::Identity(3, 3)), -1.0).matrix() -
         std::exp(-1.0) * Matrix::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((star_observable(HermitianOperator(Matrix::Identity(3, 3)), -1.0).matrix() *
         scaled.rho.entries())
            .trace()
            .real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pairing holds exactly when the transfers cancel") {
  SplitMix64 rng(23);
  const DensityMatrix rho = random_density(6, rng);
  CHECK(check_pairing(rho, -1.0, 1.0));
  CHECK(check_pairing(rho, 0.0, 0.0));
  CHECK_FALSE(check_pairing(rho, -1.0, 0.0));
  for (int i = 0; i <= 24; ++i) {
    const double sigma = -3.0 + 0.25 * i;
    CHECK(check_pairing(rho, sigma, -sigma));
    CHECK_FALSE(check_pairing(rho, sigma, -sigma + 2e-6));
    CHECK_FALSE(check_pairing(rho, sigma, -sigma - 1e-3));
  }
}

TEST_CASE("scenario ledgers") {
  const ScenarioLedger type1 = ledger_for_scenario(TransferScenario::type_i());
  CHECK(type1.accepted);
  CHECK(type1.ledger.sigma_m_to_s == -1.0);
  CHECK(type1.ledger.sigma_s_to_m == 1.0);
  CHECK(type1.ledger.sigma_m_to_s + type1.ledger.sigma_s_to_m == 0.0);

  const ScenarioLedger type2 = ledger_for_scenario(TransferScenario::type_ii());
  CHECK(type2.accepted);
  CHECK(type2.ledger.sigma_m_to_s == 0.0);
  CHECK(type2.ledger.sigma_s_to_m == 0.0);

  const ScenarioLedger shared = ledger_for_scenario(TransferScenario::disqualified(0.5));
  CHECK_FALSE(shared.accepted);
  CHECK(shared.reason == "violates independence condition B1");

  const ScenarioLedger closed = ledger_for_scenario(TransferScenario::disqualified(0.0));
  CHECK_FALSE(closed.accepted);
  CHECK(closed.reason == "S closed, M disqualified");

  const ScenarioLedger full_weight = ledger_for_scenario(TransferScenario::disqualified(1.0));
  CHECK(full_weight.accepted);
  CHECK(full_weight.ledger.sigma_m_to_s == -1.0);

  CHECK(type1.to_record().find("accepted=true") != std::string::npos);
  CHECK(shared.to_record().find("accepted=false") != std::string::npos);
}

TEST_CASE("the no-transfer superoperator is trace-preserving") {
  SplitMix64 rng(29);
  const Superoperator op = no_transfer_superoperator(ProjectorFamily::blocks({2, 2}));
  for (int rep = 0; rep < 20; ++rep) {
    const DensityMatrix rho = random_density(4, rng);
    CHECK(op(rho).trace() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

}  // TEST_SUITE
