#include "lzqed/model.hpp"

#include <cmath>
#include <sstream>

namespace lzqed {

void validate(const SystemParams& p) {
  std::ostringstream err;
  if (!(p.omega0 > 0.0)) err << "omega0 must be positive; ";
  if (!(p.Omega0 > 0.0)) err << "Omega0 must be positive; ";
  if (p.g0 < 0.0) err << "g0 must be non-negative; ";
  if (p.eps_Omega < 0.0) err << "eps_Omega must be non-negative; ";
  if (p.eps_Omega >= 0.1 * p.Omega0) err << "eps_Omega must be < 0.1 Omega0 (weak modulation); ";
  if (p.kappa < 0.0 || p.gamma < 0.0 || p.gamma_phi < 0.0) err << "rates must be non-negative; ";
  const std::string msg = err.str();
  if (!msg.empty()) throw InvalidArgument("invalid system parameters: " + msg);
}

DerivedParams derive(const SystemParams& p) {
  DerivedParams d;
  d.Delta_plus = p.omega0 + p.Omega0;
  d.Delta_minus = p.omega0 - p.Omega0;
  const double g2 = p.g0 * p.g0;
  d.delta_plus = g2 / d.Delta_plus;
  d.Lambda = p.g0 / d.Delta_plus;
  d.xi = d.Lambda * p.g0 / (2.0 * p.omega0);
  if (std::abs(d.Delta_minus) >= kResonanceTolerance) {
    d.delta_minus = g2 / d.Delta_minus;
    d.alpha_kerr = g2 * g2 / (d.Delta_minus * d.Delta_minus * d.Delta_minus);
    d.D_sign = d.Delta_minus > 0.0 ? 1 : -1;
  }
  d.eps_complex = std::polar(p.eps_Omega, p.phi_Omega);
  return d;
}

std::string to_string(const Regime& r) {
  switch (r.kind) {
    case RegimeKind::ResonantPlus: return "resonant+";
    case RegimeKind::ResonantMinus: return "resonant-";
    case RegimeKind::AntiJc: return "anti_jc";
    case RegimeKind::Dce: return "dce";
    case RegimeKind::Sideband: return "sideband";
  }
  return "unknown";
}

Regime parse_regime(const std::string& kind, int m) {
  if (kind == "resonant+" || kind == "resonant") return {RegimeKind::ResonantPlus, 0};
  if (kind == "resonant-") return {RegimeKind::ResonantMinus, 0};
  if (kind == "anti_jc") return {RegimeKind::AntiJc, 0};
  if (kind == "dce") return {RegimeKind::Dce, 0};
  if (kind == "sideband") {
    if (m < 1) throw InvalidArgument("sideband regime needs m >= 1");
    return {RegimeKind::Sideband, m};
  }
  throw InvalidArgument("unknown regime '" + kind + "'");
}

SweepProtocol make_sweep(double eta_center, double beta_abs, double nu0_beta,
                         double nu_rate_beta2, int direction, double t_end_beta,
                         double k_range) {
  if (!(beta_abs > 0.0)) throw InvalidArgument("sweep needs |beta| > 0");
  if (direction != 1 && direction != -1) throw InvalidArgument("direction must be +1 or -1");
  if (t_end_beta < 0.0) throw InvalidArgument("t_end must be non-negative");
  SweepProtocol s;
  s.eta_center = eta_center;
  s.nu0 = nu0_beta * beta_abs;
  s.nu_rate = nu_rate_beta2 * beta_abs * beta_abs;
  s.direction = direction;
  s.t_end = t_end_beta / beta_abs;
  s.k_range = k_range;
  // nu(t) is linear, so the endpoints bound it.
  const double worst = std::max(std::abs(nu0_beta), std::abs(nu0_beta + nu_rate_beta2 * t_end_beta));
  if (worst > k_range * (1.0 + 1e-12)) {
    std::ostringstream err;
    err << "sweep excursion |nu| = " << worst << " |beta| exceeds k_range = " << k_range;
    throw InvalidArgument(err.str());
  }
  return s;
}

double modulation_frequency(const SweepProtocol& protocol, double t) {
  return protocol.eta_center - protocol.nu(t);
}

double qubit_frequency(const SystemParams& p, const SweepProtocol& protocol, double t) {
  return p.Omega0 + p.eps_Omega * std::sin(modulation_frequency(protocol, t) * t + p.phi_Omega);
}

Operator bare_hamiltonian(const SystemParams& p, const HilbertSpace& space) {
  const int d = space.dim();
  Operator h = Operator::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const int n = HilbertSpace::photons(i);
    const double sz = HilbertSpace::qubit(i) == Qubit::e ? 1.0 : -1.0;
    h(i, i) = p.omega0 * n + 0.5 * p.Omega0 * sz;
  }
  // g0 (a + a^dag)(s+ + s-) couples |g,n> with |e,n-1> and |e,n+1>.
  for (int n = 0; n < space.fock_cutoff(); ++n) {
    const int gn = space.index(Qubit::g, n);
    if (n >= 1) {
      const int e = space.index(Qubit::e, n - 1);
      h(gn, e) = h(e, gn) = p.g0 * std::sqrt(static_cast<double>(n));
    }
    if (n + 1 < space.fock_cutoff()) {
      const int e = space.index(Qubit::e, n + 1);
      h(gn, e) = h(e, gn) = p.g0 * std::sqrt(static_cast<double>(n + 1));
    }
  }
  return h;
}

Operator rabi_hamiltonian(const SystemParams& p, const SweepProtocol& protocol, double t,
                          const HilbertSpace& space) {
  Operator h = bare_hamiltonian(p, space);
  const double shift = 0.5 * (qubit_frequency(p, protocol, t) - p.Omega0);
  for (int i = 0; i < space.dim(); ++i) {
    h(i, i) += HilbertSpace::qubit(i) == Qubit::e ? shift : -shift;
  }
  return h;
}

Operator parity_operator(const HilbertSpace& space) {
  const int d = space.dim();
  Operator p = Operator::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const int excitations = HilbertSpace::photons(i) + (HilbertSpace::qubit(i) == Qubit::e ? 1 : 0);
    p(i, i) = excitations % 2 == 0 ? 1.0 : -1.0;
  }
  return p;
}

}  // namespace lzqed
