#include "measuretherm/entropy_transfer.hpp"

#include <cmath>
#include <sstream>

#include "measuretherm/report.hpp"

namespace measuretherm {

namespace {

Matrix apply_no_transfer_matrix(const Matrix& m, const ProjectorFamily& family) {
  const Matrix diag = dephase_matrix(m, family);
  const double decay = std::exp(-1.0);
  return diag + decay * (m - diag);
}

std::string scenario_name(const TransferScenario& s) {
  switch (s.kind) {
    case MeasurementKind::TypeI: return "type_I";
    case MeasurementKind::TypeII: return "type_II";
    case MeasurementKind::DisqualifiedAlpha:
      return "alpha(" + format_double(s.alpha) + ")";
  }
  return "unknown";
}

}  // namespace

DensityMatrix reduced_state_no_transfer(const DensityMatrix& rho_sch,
                                        const ProjectorFamily& family_on_s,
                                        std::size_t keep) {
  const Eigen::Index ds = family_on_s.dimension();
  const Eigen::Index total = rho_sch.dimension();
  if (total % ds != 0) {
    std::ostringstream os;
    os << "state dimension " << total << " is not a multiple of the measured dimension " << ds;
    throw ConfigurationError(os.str());
  }
  const Eigen::Index dm = total / ds;
  if (keep > 1) throw ConfigurationError("keep must be 0 (measured side) or 1 (partner side)");
  const ProjectorFamily extended = family_on_s.embed(1, dm);
  const Matrix scaled = apply_no_transfer_matrix(rho_sch.entries(), extended);
  Matrix out = partial_trace_matrix(scaled, {ds, dm}, keep);
  return DensityMatrix(std::move(out), rho_sch.nominal_trace());
}

TransferredState apply_transfer(const DensityMatrix& rho0, double sigma) {
  if (std::abs(rho0.trace() - 1.0) > kTraceTol) {
    throw InvariantViolation("transfer input must have unit trace");
  }
  const double scale = std::exp(-sigma);
  return TransferredState{DensityMatrix::trusted(scale * rho0.entries(), scale), sigma,
                          std::exp(sigma)};
}

HermitianOperator star_observable(const HermitianOperator& obs, double sigma) {
  return HermitianOperator(std::exp(sigma) * obs.matrix());
}

bool check_pairing(const DensityMatrix& rho, double sigma_s, double sigma_m) {
  // tr[(1_S* (x) 1_M*) rho] built literally from the starred unities.
  const Eigen::Index total = rho.dimension();
  const Matrix starred = std::exp(sigma_s) * std::exp(sigma_m) * Matrix::Identity(total, total);
  const double value = (starred * rho.entries()).trace().real();
  return std::abs(value - 1.0) <= kTraceTol;
}

ScenarioLedger ledger_for_scenario(const TransferScenario& scenario) {
  ScenarioLedger out;
  out.scenario = scenario;
  switch (scenario.kind) {
    case MeasurementKind::TypeI:
      out.accepted = true;
      out.ledger = EntropyLedger{-1.0, 1.0};
      return out;
    case MeasurementKind::TypeII:
      out.accepted = true;
      out.ledger = EntropyLedger{0.0, 0.0};
      return out;
    case MeasurementKind::DisqualifiedAlpha:
      if (std::abs(scenario.alpha - 1.0) <= 1e-12) {
        // Full weight carried by the measuring system: the valid type-I split.
        out.accepted = true;
        out.ledger = EntropyLedger{-1.0, 1.0};
        return out;
      }
      out.accepted = false;
      if (std::abs(scenario.alpha) <= 1e-12) {
        out.reason = "S closed, M disqualified";
      } else {
        out.reason = "violates independence condition B1";
      }
      return out;
  }
  throw ConfigurationError("unknown scenario kind");
}

std::string ScenarioLedger::to_record() const {
  std::ostringstream os;
  os << "scenario=" << scenario_name(scenario) << " sigma_m_to_s="
     << (accepted ? format_double(ledger.sigma_m_to_s) : std::string("-"))
     << " sigma_s_to_m=" << (accepted ? format_double(ledger.sigma_s_to_m) : std::string("-"))
     << " accepted=" << (accepted ? "true" : "false") << " reason="
     << (reason.empty() ? "-" : reason);
  return os.str();
}

Superoperator no_transfer_superoperator(ProjectorFamily family) {
  return Superoperator{Superoperator::Kind::Composition,
                       [family = std::move(family)](const DensityMatrix& rho) {
                         return DensityMatrix::trusted(
                             apply_no_transfer_matrix(rho.entries(), family),
                             rho.nominal_trace());
                       }};
}

}  // namespace measuretherm
