#pragma once

#include <string>

#include "measuretherm/operators.hpp"

namespace measuretherm {

/// How the event-reading normalization factor is split between the combined
/// measured system S and the measuring system M. Type I: an external M
/// carries the full statistical weight. Type II: the combined measured
/// system reads its own events. The alpha variant shares the weight.
enum class MeasurementKind { TypeI, TypeII, DisqualifiedAlpha };

struct TransferScenario {
  MeasurementKind kind = MeasurementKind::TypeI;
  double alpha = 1.0;  // only meaningful for DisqualifiedAlpha

  static TransferScenario type_i() { return {MeasurementKind::TypeI, 1.0}; }
  static TransferScenario type_ii() { return {MeasurementKind::TypeII, 0.0}; }
  static TransferScenario disqualified(double alpha) {
    return {MeasurementKind::DisqualifiedAlpha, alpha};
  }
};

/// Entropy moved between the subsystems by one selective measurement. The
/// two directions always cancel: no net production in S + M.
struct EntropyLedger {
  double sigma_m_to_s = 0.0;
  double sigma_s_to_m = 0.0;
};

struct ScenarioLedger {
  TransferScenario scenario;
  bool accepted = false;
  EntropyLedger ledger;
  std::string reason;

  std::string to_record() const;
};

/// State carrying its normalization explicitly: trace exp(-sigma), paired
/// with observables rescaled by exp(+sigma).
struct TransferredState {
  DensityMatrix rho;
  double sigma = 0.0;
  double base_observables_scale = 1.0;
};

/// Applies exp(-(1 - dephasing)) to a state of S (x) M -- family-diagonal
/// blocks kept, off-diagonal blocks scaled by exp(-1) -- then partial-traces
/// onto the kept subsystem (0 = S, 1 = M). Output trace is one.
DensityMatrix reduced_state_no_transfer(const DensityMatrix& rho_sch,
                                        const ProjectorFamily& family_on_s,
                                        std::size_t keep);

/// rho -> exp(-sigma) rho with the nominal trace adjusted accordingly.
TransferredState apply_transfer(const DensityMatrix& rho0, double sigma);

/// Observable rescaling exp(+sigma) O that keeps expectation values
/// well-defined against the transferred state.
HermitianOperator star_observable(const HermitianOperator& obs, double sigma);

/// True iff tr[(1_S* (x) 1_M*) rho] = 1 within 1e-10, i.e. iff the two
/// transfers cancel.
bool check_pairing(const DensityMatrix& rho, double sigma_s, double sigma_m);

/// Ledger constants for a scenario; invalid factorizations yield a tagged
/// rejection, not ledger values.
ScenarioLedger ledger_for_scenario(const TransferScenario& scenario);

/// The superoperator exp(-(1 - dephasing)) as a reusable map.
Superoperator no_transfer_superoperator(ProjectorFamily family);

}  // namespace measuretherm
