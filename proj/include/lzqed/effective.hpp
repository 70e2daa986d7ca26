#pragma once

#include <vector>

#include "lzqed/core.hpp"
#include "lzqed/integrator.hpp"
#include "lzqed/model.hpp"
#include "lzqed/spectrum.hpp"

namespace lzqed {

/// Reduced interaction-picture Hamiltonian on a few dressed levels,
///   H(V) = diag(slope (V + detuning_offset) + offset) + coupling,
/// where V is the effective detuning of the sweep.
struct EffectiveModel {
  Regime regime;
  std::vector<Label> basis;
  cplx beta{};
  double alpha_kerr = 0.0;  // dce and sideband only
  int n_max = 0;
  int D_sign = 1;
  Eigen::VectorXd slope;
  Eigen::VectorXd offset;
  Eigen::MatrixXcd coupling;
  /// Added to V. Use it to correct for a centre frequency that misses the
  /// true transition: offset = transition frequency - eta_center.
  double detuning_offset = 0.0;

  int size() const { return static_cast<int>(basis.size()); }
  Eigen::MatrixXcd hamiltonian(double V) const;
  int index_of(const Label& label) const;  // -1 when absent
};

/// Throws OutOfRegime when the regime's validity conditions fail.
/// `n_max` overrides the dispersive truncation for dce and sideband (0 keeps
/// the default rule).
EffectiveModel build_effective(const SystemParams& p, const Regime& regime, int n_max = 0);

/// Gap between the two levels of a two-level model (resonant, anti_jc) in
/// the given spectrum.
double transition_frequency(const EffectiveModel& model, const DressedSpectrum& spectrum);

/// Sets detuning_offset so that V = 0 sits on the spectrum's transition
/// frequency instead of eta_center.
void calibrate_detuning(EffectiveModel& model, const DressedSpectrum& spectrum, double eta_center);

/// Asymptotic Landau-Zener transfer 1 - exp(-pi |beta|^2 / |nu_rate|).
double lz_probability(cplx beta, double nu_rate);

struct EffectiveTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> amplitudes;

  Eigen::VectorXd populations(std::size_t sample) const { return amplitudes[sample].cwiseAbs2(); }
};

/// RK4 on i dA/dt = H(V(t)) A.
EffectiveTrajectory evolve_effective(const EffectiveModel& model, const SweepProtocol& protocol,
                                     const Eigen::VectorXcd& state0, const TimeGrid& grid);

/// |R><R| on the full space.
Operator dressed_projector(const DressedSpectrum& spectrum, const Label& label);

/// Amplitudes <R_i|psi> over the model basis (not renormalized).
Eigen::VectorXcd effective_state_from(const EffectiveModel& model, const DressedSpectrum& spectrum,
                                      const StateVector& psi);

/// Basis vector of the model for a single label.
Eigen::VectorXcd effective_basis_state(const EffectiveModel& model, const Label& label);

}  // namespace lzqed
