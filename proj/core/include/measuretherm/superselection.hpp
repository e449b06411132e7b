#pragma once

#include <vector>

#include "measuretherm/operators.hpp"

namespace measuretherm {

/// Discretized superselection-momentum description of the combined system:
/// one measured-system state per momentum grid point, weighted by the
/// apparatus momentum distribution |phi(p)|^2. The quadrature vector holds
/// trapezoid coefficients; weights are normalized so sum_i w_i q_i = 1.
struct SectorField {
  RVector momenta;
  RVector weights;
  RVector quadrature;
  std::vector<CVector> sector_states;
  RVector eigenvalues;

  void validate() const;
  Eigen::Index n_outcomes() const { return eigenvalues.size(); }
};

/// Field over an explicit momentum grid with raw (unnormalized) weights;
/// all sectors start in the superposition given by `coefficients`.
SectorField make_field(RVector momenta, RVector raw_weights,
                       const std::vector<Complex>& coefficients,
                       const std::vector<double>& eigenvalues);

/// Gaussian |phi(p)|^2 with standard deviation sigma_p on a uniform grid
/// over [-6 sigma_p, 6 sigma_p].
SectorField make_gaussian_field(const std::vector<Complex>& coefficients,
                                const std::vector<double>& eigenvalues, double sigma_p,
                                int grid_points = 4001);

/// Uniform |phi(p)|^2 on [-half_width, half_width].
SectorField make_box_field(const std::vector<Complex>& coefficients,
                           const std::vector<double>& eigenvalues, double half_width,
                           int grid_points = 4001);

/// Each sector state picks up phases exp(i t x_n p) on its components.
SectorField evolve_sectors(const SectorField& field, double t);

/// sum_p exp(i t (x_m - x_n) p) w(p) q(p); magnitude bounded by one.
Complex offdiagonal_kernel(const SectorField& field, int m, int n, double t);

/// sum_p w(p) q(p) |Psi(p)><Psi(p)| on the measured system.
DensityMatrix averaged_state(const SectorField& field);

struct DecayRecord {
  std::vector<double> times;
  std::vector<Matrix> kernels;  // kernels[k](m, n) at times[k]
};

/// Tabulates the kernel for every outcome pair over the given times
/// (sorted ascending).
DecayRecord decay_scan(const SectorField& field, const std::vector<double>& times);

}  // namespace measuretherm
