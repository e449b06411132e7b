#include "measuretherm/scheme.hpp"

#include <cmath>
#include <sstream>

#include "measuretherm/report.hpp"

namespace measuretherm {

void SchemeConfig::validate() const {
  if (coefficients.empty()) throw ConfigurationError("scheme requires at least one coefficient");
  if (eigenvalues.size() != coefficients.size()) {
    throw ConfigurationError("scheme eigenvalue count must match coefficient count");
  }
  double norm = 0.0;
  for (const Complex& c : coefficients) norm += std::norm(c);
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "scheme coefficients have squared norm " << norm << "; normalization failure";
    throw ConfigurationError(os.str());
  }
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
      if (std::abs(eigenvalues[i] - eigenvalues[j]) <= 1e-12) {
        throw ConfigurationError("scheme eigenvalues must be pairwise distinct");
      }
    }
  }
  if (apparatus_dimension < 1) throw ConfigurationError("apparatus dimension must be positive");
  if (pointer_dimension <= n_outcomes()) {
    throw ConfigurationError("pointer dimension must exceed the number of outcomes");
  }
  if (lambda_a <= 0.0 || lambda_m <= 0.0) {
    throw ConfigurationError("coupling strengths must be positive");
  }
}

std::string stage_name(SchemeStage stage) {
  switch (stage) {
    case SchemeStage::Initial: return "initial";
    case SchemeStage::PostNonselective: return "post_nonselective";
    case SchemeStage::PostEntangling: return "post_entangling";
    case SchemeStage::PostReading: return "post_reading";
  }
  return "unknown";
}

namespace {

CVector basis_vector(Eigen::Index dim, Eigen::Index i) {
  CVector v = CVector::Zero(dim);
  v(i) = 1.0;
  return v;
}

ProjectorFamily measured_family_s0(const SchemeConfig& config) {
  return ProjectorFamily::computational_basis(config.n_outcomes())
      .embed(1, config.apparatus_dimension * config.pointer_dimension);
}

void require_stage(const SchemeState& state, SchemeStage expected, const char* op) {
  if (state.stage != expected) {
    std::ostringstream os;
    os << op << " requires stage " << stage_name(expected) << " but state is at "
       << stage_name(state.stage);
    throw ProtocolError(os.str());
  }
}

}  // namespace

ProjectorFamily nonselective_family(const SchemeConfig& config) {
  return measured_family_s0(config);
}

Matrix pointer_shift_unitary(const SchemeConfig& config) {
  const Eigen::Index ns = config.n_outcomes();
  const Eigen::Index na = config.apparatus_dimension;
  const Eigen::Index nm = config.pointer_dimension;
  Matrix shift = Matrix::Zero(nm, nm);
  for (Eigen::Index j = 0; j < nm; ++j) shift((j + 1) % nm, j) = 1.0;

  Matrix u = Matrix::Zero(config.total_dimension(), config.total_dimension());
  const Matrix ia = Matrix::Identity(na, na);
  Matrix shift_power = Matrix::Identity(nm, nm);
  for (Eigen::Index n = 0; n < ns; ++n) {
    shift_power = shift_power * shift;  // shift^(n+1)
    Matrix pn = Matrix::Zero(ns, ns);
    pn(n, n) = 1.0;
    u += tensor_product(tensor_product(pn, ia), shift_power);
  }
  return u;
}

SchemeState prepare_initial(const SchemeConfig& config) {
  config.validate();
  const Eigen::Index ns = config.n_outcomes();
  CVector psi_s = CVector::Zero(ns);
  for (Eigen::Index n = 0; n < ns; ++n) psi_s(n) = config.coefficients[static_cast<std::size_t>(n)];
  const CVector psi =
      tensor_product(tensor_product(psi_s, basis_vector(config.apparatus_dimension, 0)),
                     basis_vector(config.pointer_dimension, 0));
  return SchemeState{config, SchemeStage::Initial, DensityMatrix::pure(psi), std::nullopt};
}

SchemeState apply_nonselective(const SchemeState& state) {
  require_stage(state, SchemeStage::Initial, "apply_nonselective");
  DensityMatrix rho = dephase(state.rho, nonselective_family(state.config));
  return SchemeState{state.config, SchemeStage::PostNonselective, std::move(rho), std::nullopt};
}

SchemeState apply_entangling(const SchemeState& state) {
  require_stage(state, SchemeStage::PostNonselective, "apply_entangling");
  const Matrix u = pointer_shift_unitary(state.config);
  DensityMatrix rho = DensityMatrix::trusted(u * state.rho.entries() * u.adjoint());
  return SchemeState{state.config, SchemeStage::PostEntangling, std::move(rho), std::nullopt};
}

SchemeState read_event(const SchemeState& state, SplitMix64& rng) {
  require_stage(state, SchemeStage::PostEntangling, "read_event");
  const ProjectorFamily family = measured_family_s0(state.config);
  const RVector p = born_probabilities(state.rho, family);
  std::vector<double> weights(p.data(), p.data() + p.size());
  const int outcome = static_cast<int>(rng.discrete(weights));
  const Matrix& proj = family.projector(static_cast<std::size_t>(outcome));
  Matrix collapsed = proj * state.rho.entries() * proj;
  collapsed /= collapsed.trace().real();
  return SchemeState{state.config, SchemeStage::PostReading, DensityMatrix(std::move(collapsed)),
                     outcome};
}

std::string SchemeState::to_record() const {
  const ProjectorFamily family = measured_family_s0(config);
  const RVector diag = born_probabilities(rho, family);
  std::ostringstream os;
  os << "stage=" << stage_name(stage) << " trace=" << format_double(rho.trace())
     << " purity=" << format_double(rho.purity()) << " diagonal=";
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (i > 0) os << ',';
    os << format_double(diag(i));
  }
  os << " outcome=" << (outcome ? std::to_string(*outcome) : std::string("-"));
  return os.str();
}

std::string SchemeTranscript::to_record() const {
  std::ostringstream os;
  for (const SchemeState& s : states) os << s.to_record() << '\n';
  return os.str();
}

SchemeTranscript run_scheme(const SchemeConfig& config) {
  SplitMix64 rng(config.seed);
  SchemeState s0 = prepare_initial(config);
  SchemeState s1 = apply_nonselective(s0);
  SchemeState s2 = apply_entangling(s1);
  SchemeState s3 = read_event(s2, rng);
  const int outcome = *s3.outcome;
  return SchemeTranscript{{std::move(s0), std::move(s1), std::move(s2), std::move(s3)}, outcome};
}

}  // namespace measuretherm
