#include "lzqed/dissipators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lzqed {

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::None: return "none";
    case KernelKind::Phenomenological: return "ph";
    case KernelKind::JcDressed: return "jc";
    case KernelKind::RabiDressed: return "rabi";
  }
  return "unknown";
}

KernelKind parse_kernel(const std::string& s) {
  if (s == "none") return KernelKind::None;
  if (s == "ph" || s == "phenomenological") return KernelKind::Phenomenological;
  if (s == "jc") return KernelKind::JcDressed;
  if (s == "rabi" || s == "r") return KernelKind::RabiDressed;
  throw InvalidArgument("unknown kernel '" + s + "' (expected none|ph|jc|rabi)");
}

RateTable build_rate_table(const DressedSpectrum& basis, const SystemParams& p) {
  if (!basis.complete()) throw InvalidArgument("rate table needs a complete dressed basis");
  const auto ops = fock_and_qubit_operators(basis.space);
  const Eigen::MatrixXcd v = basis.basis_matrix();
  const Eigen::MatrixXcd sz = v.adjoint() * ops.sz * v;
  const Eigen::MatrixXcd xf = v.adjoint() * ops.x_field * v;
  const Eigen::MatrixXcd xq = v.adjoint() * ops.x_qubit * v;
  const int d = basis.space.dim();

  RateTable t;
  t.basis = basis;
  t.phi = std::sqrt(p.gamma_phi / 2.0) * sz.diagonal().real();
  t.gamma_phi = Eigen::MatrixXd::Zero(d, d);
  t.gamma_kappa = Eigen::MatrixXd::Zero(d, d);
  t.gamma_gamma = Eigen::MatrixXd::Zero(d, d);
  for (int l = 0; l < d; ++l) {
    for (int k = 0; k < d; ++k) {
      if (l == k) continue;
      const double gap = basis.levels[static_cast<std::size_t>(k)].energy -
                         basis.levels[static_cast<std::size_t>(l)].energy;
      if (gap < 0.0) continue;  // spectral densities vanish at negative frequency
      t.gamma_phi(l, k) = 0.5 * p.gamma_phi * std::norm(sz(l, k));
      t.gamma_kappa(l, k) = p.kappa * std::norm(xf(l, k));
      t.gamma_gamma(l, k) = p.gamma * std::norm(xq(l, k));
    }
  }

  // Secular approximation assumes distinct transition frequencies.
  struct Tr {
    double w;
    int l, k;
  };
  std::vector<Tr> tr;
  for (int l = 0; l < d; ++l)
    for (int k = l + 1; k < d; ++k)
      tr.push_back({basis.levels[static_cast<std::size_t>(k)].energy -
                        basis.levels[static_cast<std::size_t>(l)].energy,
                    l, k});
  std::sort(tr.begin(), tr.end(), [](const Tr& a, const Tr& b) { return a.w < b.w; });
  int reported = 0, total = 0;
  std::ostringstream w;
  for (std::size_t i = 1; i < tr.size(); ++i) {
    if (tr[i].w - tr[i - 1].w < 1e-8) {
      ++total;
      if (reported < 5) {
        const auto& L = basis.levels;
        w << " (" << L[static_cast<std::size_t>(tr[i - 1].k)].label.str() << "->"
          << L[static_cast<std::size_t>(tr[i - 1].l)].label.str() << ", "
          << L[static_cast<std::size_t>(tr[i].k)].label.str() << "->"
          << L[static_cast<std::size_t>(tr[i].l)].label.str() << ")";
        ++reported;
      }
    }
  }
  if (total > 0) {
    t.warnings.push_back("degenerate transition frequencies in " + std::to_string(total) +
                         " pair(s):" + w.str());
  }
  return t;
}

DensityMatrix lindblad_term(const Operator& jump, const DensityMatrix& rho) {
  const Operator od = jump.adjoint();
  const Operator odo = od * jump;
  return jump * rho * od - 0.5 * (odo * rho + rho * odo);
}

DressedGenerator::DressedGenerator(const RateTable& table) {
  const Eigen::MatrixXd rates = table.total();
  const Eigen::Index d = rates.rows();
  const Eigen::VectorXd out_rate = rates.colwise().sum().transpose();  // sum_l Gamma[l][k]
  decay_.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double dphi = table.phi(i) - table.phi(j);
      decay_(i, j) = -0.5 * dphi * dphi - 0.5 * (out_rate(i) + out_rate(j));
    }
  }
  feed_.resize(static_cast<std::size_t>(d));
  for (Eigen::Index l = 0; l < d; ++l)
    for (Eigen::Index k = 0; k < d; ++k)
      if (rates(l, k) != 0.0) feed_[static_cast<std::size_t>(l)].emplace_back(static_cast<int>(k), rates(l, k));
}

void DressedGenerator::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
  out.noalias() = decay_.cwiseProduct(rho);
  for (std::size_t l = 0; l < feed_.size(); ++l) {
    double gain = 0.0;
    for (const auto& [k, rate] : feed_[l]) gain += rate * rho(k, k).real();
    out(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) += gain;
  }
}

DensityMatrix apply_dressed(const DensityMatrix& rho, const RateTable& table) {
  const Eigen::MatrixXcd v = table.basis.basis_matrix();
  const Eigen::MatrixXcd rt = v.adjoint() * rho * v;
  Eigen::MatrixXcd out;
  DressedGenerator(table).apply(rt, out);
  return v * out * v.adjoint();
}

PhenomenologicalGenerator::PhenomenologicalGenerator(const SystemParams& p, const HilbertSpace& space)
    : dim_(space.dim()), kappa_(p.kappa), gamma_(p.gamma) {
  decay_.resize(dim_, dim_);
  Eigen::VectorXd sqrt_n1(dim_);
  for (int i = 0; i < dim_; ++i) {
    sqrt_n1(i) = std::sqrt(static_cast<double>(HilbertSpace::photons(i) + 1));
    for (int j = 0; j < dim_; ++j) {
      const int ni = HilbertSpace::photons(i), nj = HilbertSpace::photons(j);
      const bool ei = HilbertSpace::qubit(i) == Qubit::e, ej = HilbertSpace::qubit(j) == Qubit::e;
      double c = -0.5 * p.kappa * (ni + nj) - 0.5 * p.gamma * ((ei ? 1 : 0) + (ej ? 1 : 0));
      // (gamma_phi/2) D[sz]: sz rho sz - rho = -2 rho_ij when the qubit states differ.
      if (ei != ej) c -= p.gamma_phi;
      decay_(i, j) = c;
    }
  }
  const int m = dim_ - 2;
  photon_feed_ = (p.kappa * sqrt_n1.head(m) * sqrt_n1.head(m).transpose()).cast<cplx>();
}

void PhenomenologicalGenerator::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
  out.noalias() = decay_.cwiseProduct(rho);
  // kappa a rho a^dag: (i, j) <- sqrt((n_i+1)(n_j+1)) rho(i+2, j+2).
  if (kappa_ != 0.0) {
    const int m = dim_ - 2;
    out.topLeftCorner(m, m) += photon_feed_.cwiseProduct(rho.bottomRightCorner(m, m));
  }
  // gamma s- rho s+: (g_n, g_m) <- rho(e_n, e_m).
  if (gamma_ != 0.0) {
    for (int j = 0; j < dim_; j += 2)
      for (int i = 0; i < dim_; i += 2) out(i, j) += gamma_ * rho(i + 1, j + 1);
  }
}

DensityMatrix apply_phenomenological(const DensityMatrix& rho, const SystemParams& p,
                                     const HilbertSpace& space) {
  Eigen::MatrixXcd out;
  PhenomenologicalGenerator(p, space).apply(rho, out);
  return out;
}

}  // namespace lzqed
