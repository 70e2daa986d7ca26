#pragma once

#include <optional>
#include <string>

#include "lzqed/core.hpp"
#include "lzqed/qops.hpp"

namespace lzqed {

/// Physical constants. All frequencies in units of the cavity frequency
/// (omega0 = 1 by convention), hbar = 1, times in 1/omega0.
struct SystemParams {
  double omega0 = 1.0;
  double Omega0 = 1.0;      // bare qubit frequency
  double g0 = 0.04;         // qubit-field coupling
  double eps_Omega = 0.0;   // modulation depth
  double phi_Omega = 0.0;   // modulation phase (rad)
  double kappa = 0.0;       // cavity damping
  double gamma = 0.0;       // qubit damping
  double gamma_phi = 0.0;   // pure dephasing

  bool operator==(const SystemParams&) const = default;
};

/// Throws InvalidArgument on negative rates or coupling, or when the
/// modulation is not weak (eps_Omega >= 0.1 Omega0).
void validate(const SystemParams& p);

/// Constants derived from SystemParams.
struct DerivedParams {
  double Delta_plus = 0.0;   // omega0 + Omega0
  double Delta_minus = 0.0;  // omega0 - Omega0
  double delta_plus = 0.0;   // g0^2 / Delta_plus (Bloch-Siegert shift)
  std::optional<double> delta_minus;  // g0^2 / Delta_minus, unset at resonance
  double Lambda = 0.0;       // g0 / Delta_plus
  double xi = 0.0;           // Lambda g0 / (2 omega0)
  std::optional<double> alpha_kerr;   // g0^4 / Delta_minus^3, unset at resonance
  int D_sign = 0;            // sign(Delta_minus), 0 at resonance
  cplx eps_complex{};        // eps_Omega exp(i phi_Omega)

  bool resonant() const { return !delta_minus.has_value(); }
};

inline constexpr double kResonanceTolerance = 1e-6;

DerivedParams derive(const SystemParams& p);

enum class RegimeKind { ResonantPlus, ResonantMinus, AntiJc, Dce, Sideband };

/// Which pair (or ladder) of dressed states the modulation targets.
struct Regime {
  RegimeKind kind = RegimeKind::ResonantPlus;
  int m = 0;  // sideband index, only for Sideband

  bool operator==(const Regime&) const = default;
};

std::string to_string(const Regime& r);
Regime parse_regime(const std::string& kind, int m = 0);

/// Linear chirp of the modulation frequency,
///   eta(t) = eta_center - direction * (nu0 + nu_rate t).
struct SweepProtocol {
  double eta_center = 2.0;
  double nu0 = 0.0;
  double nu_rate = 0.0;
  int direction = 1;
  double t_end = 0.0;
  double k_range = 8.0;

  /// The detuning function nu(t) as it enters eta = eta_center - nu(t).
  double nu(double t) const { return direction * (nu0 + nu_rate * t); }
  /// Effective detuning V = nu + t dnu/dt seen by the dressed states.
  double effective_detuning(double t) const { return direction * (nu0 + 2.0 * nu_rate * t); }
};

/// Protocol from quantities expressed in units of |beta|: nu0 = nu0_beta |beta|,
/// nu_rate = nu_rate_beta2 |beta|^2, t_end = t_end_beta / |beta|. Throws
/// InvalidArgument if |nu(t)| exceeds k_range |beta| anywhere on [0, t_end].
SweepProtocol make_sweep(double eta_center, double beta_abs, double nu0_beta,
                         double nu_rate_beta2, int direction, double t_end_beta,
                         double k_range = 8.0);

double modulation_frequency(const SweepProtocol& protocol, double t);

/// Omega(t) = Omega0 + eps sin(eta(t) t + phi). The phase is eta(t) * t, not
/// the integral of eta; the effective detuning V(t) relies on this.
double qubit_frequency(const SystemParams& p, const SweepProtocol& protocol, double t);

/// H = omega0 n + Omega/2 sz + g0 (a + a^dag)(s+ + s-).
Operator bare_hamiltonian(const SystemParams& p, const HilbertSpace& space);
Operator rabi_hamiltonian(const SystemParams& p, const SweepProtocol& protocol, double t,
                          const HilbertSpace& space);

/// exp(i pi (n + |e><e|)), the Z2 symmetry of the Rabi model.
Operator parity_operator(const HilbertSpace& space);

}  // namespace lzqed
