#include "lzqed/observables.hpp"

namespace lzqed {

MandelQ mandel_q_from_distribution(const Eigen::VectorXd& p) {
  double m1 = 0.0, m2 = 0.0;
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    m1 += static_cast<double>(n) * p(n);
    m2 += static_cast<double>(n * n) * p(n);
  }
  if (m1 < kVacuumThreshold) return {0.0, false};
  return {(m2 - m1 * m1 - m1) / m1, true};
}

namespace {

void joint_distributions(const DensityMatrix& rho, const HilbertSpace& space, Eigen::VectorXd& pg,
                         Eigen::VectorXd& pe) {
  const int nf = space.fock_cutoff();
  pg.resize(nf);
  pe.resize(nf);
  for (int n = 0; n < nf; ++n) {
    pg(n) = rho(space.index(Qubit::g, n), space.index(Qubit::g, n)).real();
    pe(n) = rho(space.index(Qubit::e, n), space.index(Qubit::e, n)).real();
  }
}

}  // namespace

MandelQ mandel_q(const DensityMatrix& rho, const HilbertSpace& space) {
  Eigen::VectorXd pg, pe;
  joint_distributions(rho, space, pg, pe);
  return mandel_q_from_distribution(pg + pe);
}

Eigen::MatrixXcd reduced_field_state(const DensityMatrix& rho, const HilbertSpace& space) {
  const int nf = space.fock_cutoff();
  Eigen::MatrixXcd r(nf, nf);
  for (int m = 0; m < nf; ++m)
    for (int n = 0; n < nf; ++n)
      r(m, n) = rho(space.index(Qubit::g, m), space.index(Qubit::g, n)) +
                rho(space.index(Qubit::e, m), space.index(Qubit::e, n));
  return r;
}

double dressed_population(const DensityMatrix& rho, const DressedSpectrum& spectrum, const Label& label) {
  const StateVector& v = spectrum.at(label).vector;
  return v.dot(rho * v).real();
}

ObservableBundle bundle(const DensityMatrix& rho, const HilbertSpace& space,
                        const DressedSpectrum* spectrum, std::span<const Label> labels) {
  ObservableBundle b;
  joint_distributions(rho, space, b.joint_g, b.joint_e);
  b.fock_dist = b.joint_g + b.joint_e;
  b.p_excited = b.joint_e.sum();
  b.mean_n = 0.0;
  for (Eigen::Index n = 0; n < b.fock_dist.size(); ++n) b.mean_n += static_cast<double>(n) * b.fock_dist(n);
  b.mandel_q = mandel_q_from_distribution(b.fock_dist);
  if (spectrum != nullptr) {
    if (labels.empty()) {
      for (const auto& lv : spectrum->levels)
        b.dressed_pops.emplace_back(lv.label, lv.vector.dot(rho * lv.vector).real());
    } else {
      for (const auto& l : labels) b.dressed_pops.emplace_back(l, dressed_population(rho, *spectrum, l));
    }
  }
  return b;
}

}  // namespace lzqed
