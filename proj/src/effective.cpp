#include "lzqed/effective.hpp"

#include <cmath>
#include <sstream>

namespace lzqed {

Eigen::MatrixXcd EffectiveModel::hamiltonian(double V) const {
  Eigen::MatrixXcd h = coupling;
  h.diagonal() += (slope * (V + detuning_offset) + offset).cast<cplx>();
  return h;
}

int EffectiveModel::index_of(const Label& label) const {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == label) return static_cast<int>(i);
  return -1;
}

namespace {

void allocate(EffectiveModel& m) {
  const auto n = static_cast<Eigen::Index>(m.basis.size());
  m.slope = Eigen::VectorXd::Zero(n);
  m.offset = Eigen::VectorXd::Zero(n);
  m.coupling = Eigen::MatrixXcd::Zero(n, n);
}

void couple(EffectiveModel& m, int i, int j, cplx value) {
  m.coupling(i, j) = value;
  m.coupling(j, i) = std::conj(value);
}

[[noreturn]] void out_of_regime(const std::string& what) { throw OutOfRegime(what); }

}  // namespace

EffectiveModel build_effective(const SystemParams& p, const Regime& regime, int n_max) {
  validate(p);
  if (!(p.g0 > 0.0)) throw OutOfRegime("effective models need g0 > 0");
  const DerivedParams d = derive(p);
  EffectiveModel m;
  m.regime = regime;
  switch (regime.kind) {
    case RegimeKind::ResonantPlus:
    case RegimeKind::ResonantMinus: {
      if (!d.resonant()) out_of_regime("resonant model needs Delta_minus = 0");
      const int s = regime.kind == RegimeKind::ResonantPlus ? 1 : -1;
      m.D_sign = s;
      m.beta = p.g0 * d.eps_complex / (2.0 * std::sqrt(2.0) * d.Delta_plus);
      m.basis = {Label::ground(), Label{2, s}};
      allocate(m);
      m.slope << -0.5, 0.5;
      couple(m, 0, 1, static_cast<double>(s) * I * m.beta);
      return m;
    }
    default: break;
  }

  if (d.resonant()) out_of_regime("dispersive models need Delta_minus != 0");
  const double delta_minus = *d.delta_minus;
  const double alpha = *d.alpha_kerr;
  const int D = d.D_sign;
  const int rule = dispersive_n_max(p);
  m.D_sign = D;
  m.alpha_kerr = alpha;

  switch (regime.kind) {
    case RegimeKind::AntiJc: {
      if (rule < 2) {
        std::ostringstream os;
        os << "dispersive condition g0 sqrt(2) << |Delta_-|/2 fails (n_max = " << rule << ")";
        out_of_regime(os.str());
      }
      m.n_max = 2;
      m.beta = p.g0 * d.eps_complex / (2.0 * d.Delta_plus);
      m.basis = {Label::ground(), Label{2, -D}};
      allocate(m);
      m.slope << -0.5, 0.5;
      couple(m, 0, 1, -static_cast<double>(D) * I * m.beta);
      return m;
    }
    case RegimeKind::Dce: {
      m.n_max = n_max > 0 ? n_max : rule;
      if (m.n_max < 2 || m.n_max > rule) {
        std::ostringstream os;
        os << "dce ladder up to n = " << m.n_max << " violates the dispersive bound n <= " << rule;
        out_of_regime(os.str());
      }
      m.beta = delta_minus * d.eps_complex / (std::sqrt(2.0) * d.Delta_plus);
      m.basis.push_back(Label::ground());
      for (int n = 1; n <= m.n_max; ++n) m.basis.push_back(Label{n, D});
      allocate(m);
      for (int n = 0; n <= m.n_max; ++n) {
        m.slope(n) = 0.5 * n;
        m.offset(n) = -alpha * (n - 2) * n;
        if (n + 2 <= m.n_max) couple(m, n, n + 2, I * std::sqrt((n + 1.0) * (n + 2.0) / 2.0) * m.beta);
      }
      return m;
    }
    case RegimeKind::Sideband: {
      const int target = regime.m;
      m.n_max = n_max > 0 ? n_max : rule;
      if (target < 1) out_of_regime("sideband index must be >= 1");
      if (target > m.n_max || m.n_max > rule) {
        std::ostringstream os;
        os << "sideband ladder (m = " << target << ", n_max = " << m.n_max
           << ") violates the dispersive bound n <= " << rule;
        out_of_regime(os.str());
      }
      if (!(p.eps_Omega * std::sqrt(static_cast<double>(target)) < 0.5 * p.g0)) {
        std::ostringstream os;
        os << "single-pair coupling needs eps sqrt(m) << g0: " << p.eps_Omega * std::sqrt(double(target))
           << " vs " << p.g0;
        out_of_regime(os.str());
      }
      const cplx eps_d = D > 0 ? d.eps_complex : std::conj(d.eps_complex);
      m.beta = p.g0 * eps_d / d.Delta_minus;
      m.basis.push_back(Label::ground());
      for (int n = 1; n <= m.n_max; ++n) {
        m.basis.push_back(Label{n, D});
        m.basis.push_back(Label{n, -D});
      }
      allocate(m);
      const double shift = delta_minus - d.delta_plus;
      for (int n = 1; n <= m.n_max; ++n) {
        const int up = 2 * n - 1;  // (n, D)
        const int dn = 2 * n;      // (n, -D)
        const double c0 = (-2.0 * shift * (target - n) + 2.0 * alpha * (target * target - n * n)) / 2.0;
        m.slope(up) = 0.5 * D;
        m.slope(dn) = -0.5 * D;
        m.offset(up) = c0;
        m.offset(dn) = -c0;
        couple(m, dn, up, I * (std::sqrt(static_cast<double>(n)) / 2.0) * m.beta);
      }
      return m;
    }
    default: break;
  }
  throw InvalidArgument("unknown regime");
}

double transition_frequency(const EffectiveModel& model, const DressedSpectrum& spectrum) {
  if (model.size() != 2) throw InvalidArgument("transition frequency needs a two-level model");
  return spectrum.at(model.basis[1]).energy - spectrum.at(model.basis[0]).energy;
}

void calibrate_detuning(EffectiveModel& model, const DressedSpectrum& spectrum, double eta_center) {
  model.detuning_offset = transition_frequency(model, spectrum) - eta_center;
}

double lz_probability(cplx beta, double nu_rate) {
  if (nu_rate == 0.0) throw InvalidArgument("sweep rate must be nonzero");
  return 1.0 - std::exp(-M_PI * std::norm(beta) / std::abs(nu_rate));
}

EffectiveTrajectory evolve_effective(const EffectiveModel& model, const SweepProtocol& protocol,
                                     const Eigen::VectorXcd& state0, const TimeGrid& grid) {
  if (state0.size() != model.size()) throw InvalidArgument("state does not match the model basis");
  if (!(grid.dt > 0.0) || grid.sample_stride < 1) throw InvalidArgument("invalid time grid");
  EffectiveTrajectory out;
  Eigen::VectorXcd a = state0;
  const long n_steps = grid.steps();
  const double dt = grid.dt;
  auto deriv = [&](double t, const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    return cplx(0.0, -1.0) * (model.hamiltonian(protocol.effective_detuning(t)) * x);
  };
  out.times.push_back(grid.t_start);
  out.amplitudes.push_back(a);
  for (long s = 0; s < n_steps; ++s) {
    const double t = grid.t_start + static_cast<double>(s) * dt;
    const Eigen::VectorXcd k1 = deriv(t, a);
    const Eigen::VectorXcd k2 = deriv(t + 0.5 * dt, a + 0.5 * dt * k1);
    const Eigen::VectorXcd k3 = deriv(t + 0.5 * dt, a + 0.5 * dt * k2);
    const Eigen::VectorXcd k4 = deriv(t + dt, a + dt * k3);
    a += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((s + 1) % grid.sample_stride == 0 || s + 1 == n_steps) {
      out.times.push_back(grid.t_start + static_cast<double>(s + 1) * dt);
      out.amplitudes.push_back(a);
    }
  }
  return out;
}

Operator dressed_projector(const DressedSpectrum& spectrum, const Label& label) {
  const StateVector& v = spectrum.at(label).vector;
  return v * v.adjoint();
}

Eigen::VectorXcd effective_state_from(const EffectiveModel& model, const DressedSpectrum& spectrum,
                                      const StateVector& psi) {
  Eigen::VectorXcd a(model.size());
  for (int i = 0; i < model.size(); ++i) a(i) = spectrum.at(model.basis[i]).vector.dot(psi);
  return a;
}

Eigen::VectorXcd effective_basis_state(const EffectiveModel& model, const Label& label) {
  const int i = model.index_of(label);
  if (i < 0) throw InvalidArgument("label " + label.str() + " is not in the model basis");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(model.size());
  a(i) = 1.0;
  return a;
}

}  // namespace lzqed
