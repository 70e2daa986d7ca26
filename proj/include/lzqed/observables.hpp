#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lzqed/core.hpp"
#include "lzqed/qops.hpp"
#include "lzqed/spectrum.hpp"

namespace lzqed {

/// Mandel Q = (<(dn)^2> - <n>) / <n>. Undefined (valid = false, value 0)
/// when <n> < 1e-10.
struct MandelQ {
  double value = 0.0;
  bool valid = false;
};

inline constexpr double kVacuumThreshold = 1e-10;

struct ObservableBundle {
  double mean_n = 0.0;
  MandelQ mandel_q;
  double p_excited = 0.0;
  Eigen::VectorXd fock_dist;  // P(n)
  Eigen::VectorXd joint_g;    // P(g, n)
  Eigen::VectorXd joint_e;    // P(e, n)
  std::vector<std::pair<Label, double>> dressed_pops;
};

MandelQ mandel_q(const DensityMatrix& rho, const HilbertSpace& space);
MandelQ mandel_q_from_distribution(const Eigen::VectorXd& photon_probabilities);

/// Partial trace over the qubit.
Eigen::MatrixXcd reduced_field_state(const DensityMatrix& rho, const HilbertSpace& space);

/// <R|rho|R> for one dressed level.
double dressed_population(const DensityMatrix& rho, const DressedSpectrum& spectrum, const Label& label);

/// All figure observables. Dressed populations are filled only when a
/// spectrum is given; with an empty label list every level is reported.
ObservableBundle bundle(const DensityMatrix& rho, const HilbertSpace& space,
                        const DressedSpectrum* spectrum = nullptr,
                        std::span<const Label> labels = {});

}  // namespace lzqed
