#include "lzqed/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace lzqed {

long TimeGrid::steps() const { return std::lround((t_end - t_start) / dt); }

void TimeGrid::validate(double omega0, double eta_max) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (sample_stride < 1) throw InvalidArgument("sample stride must be >= 1");
  if (t_end < t_start) throw InvalidArgument("t_end precedes t_start");
  const double bound = 0.1 / std::max(omega0, eta_max);
  if (dt > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "time step " << dt << " exceeds 0.1/max(omega0, eta_max) = " << bound;
    throw InvalidArgument(os.str());
  }
}

TimeGrid TimeGrid::refined() const { return {t_start, t_end, dt / 2.0, 2 * sample_stride}; }

double max_modulation_frequency(const SweepProtocol& protocol) {
  return std::max(std::abs(modulation_frequency(protocol, 0.0)),
                  std::abs(modulation_frequency(protocol, protocol.t_end)));
}

RateTable kernel_rate_table(KernelKind kernel, const SystemParams& p, const HilbertSpace& space) {
  switch (kernel) {
    case KernelKind::JcDressed: return build_rate_table(jc_basis(p, space), p);
    case KernelKind::RabiDressed: return build_rate_table(bloch_siegert_basis(p, space), p);
    default: throw InvalidArgument("rate tables exist only for dressed kernels");
  }
}

namespace {

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const SystemParams& p, const SweepProtocol& protocol,
                  KernelKind kernel, const TimeGrid& grid, const EvolveOptions& options) {
  validate(p);
  if (options.enforce_step_bound) grid.validate(p.omega0, max_modulation_frequency(protocol));
  const int dim = static_cast<int>(rho0.rows());
  if (rho0.cols() != dim || dim % 2 != 0) throw InvalidArgument("rho0 must be square on a qubit x Fock space");
  const HilbertSpace space(dim / 2);
  const auto ops = fock_and_qubit_operators(space);

  // Propagation happens in a fixed working basis W: Fock for none/ph, the
  // dressed basis of the rate table for jc/rabi.
  std::shared_ptr<const RateTable> table = options.rate_table;
  if ((kernel == KernelKind::JcDressed || kernel == KernelKind::RabiDressed) && !table)
    table = std::make_shared<const RateTable>(kernel_rate_table(kernel, p, space));
  if (table && table->basis.space != space) throw InvalidArgument("rate table lives on another space");

  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(dim, dim);
  std::function<void(const Eigen::MatrixXcd&, Eigen::MatrixXcd&)> dissipator;
  std::unique_ptr<DressedGenerator> dressed;
  std::unique_ptr<PhenomenologicalGenerator> phenom;
  switch (kernel) {
    case KernelKind::None: break;
    case KernelKind::Phenomenological:
      phenom = std::make_unique<PhenomenologicalGenerator>(p, space);
      dissipator = [&](const Eigen::MatrixXcd& r, Eigen::MatrixXcd& o) { phenom->apply(r, o); };
      break;
    case KernelKind::JcDressed:
    case KernelKind::RabiDressed:
      w = table->basis.basis_matrix();
      dressed = std::make_unique<DressedGenerator>(*table);
      dissipator = [&](const Eigen::MatrixXcd& r, Eigen::MatrixXcd& o) { dressed->apply(r, o); };
      break;
  }
  const Eigen::MatrixXcd w_adj = w.adjoint();
  Eigen::MatrixXcd h_static = w_adj * bare_hamiltonian(p, space) * w;
  const Eigen::MatrixXcd sz_half = w_adj * (0.5 * ops.sz) * w;
  const bool rotate = options.frame == Frame::Interaction;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  if (rotate) {
    diag = h_static.diagonal().real();
    h_static.diagonal().setZero();
  }

  // Phases exp(i D t) of the interaction frame.
  Eigen::VectorXcd phase = Eigen::VectorXcd::Ones(dim);
  double phase_time = 0.0;
  auto set_phase = [&](double t) {
    if (t == phase_time) return;
    for (int i = 0; i < dim; ++i) phase(i) = std::polar(1.0, diag(i) * t);
    phase_time = t;
  };

  Eigen::MatrixXcd h(dim, dim), k(dim, dim), l(dim, dim);
  auto rhs = [&](double t, const Eigen::MatrixXcd& r, Eigen::MatrixXcd& out) {
    const double drive = qubit_frequency(p, protocol, t) - p.Omega0;
    h = h_static + drive * sz_half;
    if (rotate) {
      set_phase(t);
      h = phase.asDiagonal() * h * phase.conjugate().asDiagonal();
    }
    k.noalias() = h * r;
    // -i(H r - r H) with r Hermitian: r H = (H r)^dag.
    out = (k - k.adjoint()) * cplx(0.0, -1.0);
    if (dissipator) {
      dissipator(r, l);
      out += l;
    }
  };

  // Back to the Fock basis in the lab frame.
  auto lab_state = [&](double t, const Eigen::MatrixXcd& r) -> DensityMatrix {
    if (!rotate) return w * r * w_adj;
    set_phase(t);
    const Eigen::MatrixXcd wr = w * phase.conjugate().asDiagonal();
    return wr * r * wr.adjoint();
  };

  Trajectory traj;
  Diagnostics& stats = traj.diagnostics;
  const std::span<const Label> labels(options.labels);

  auto record = [&](double t, const Eigen::MatrixXcd& r_work) -> std::string {
    DensityMatrix rho = lab_state(t, r_work);
    if (!rho.allFinite()) return "non-finite density matrix";
    const double trace_err = std::abs(rho.trace() - cplx(1.0, 0.0));
    const double leak = leakage(rho, space);
    stats.max_trace_error = std::max(stats.max_trace_error, trace_err);
    stats.max_leakage = std::max(stats.max_leakage, leak);
    traj.times.push_back(t);
    traj.records.push_back(bundle(rho, space, options.projection.get(), labels));
    traj.leakage.push_back(leak);
    if (options.store_states) traj.states.push_back(rho);
    std::ostringstream os;
    if (trace_err > options.limits.trace) {
      os << "trace error " << trace_err << " at t = " << t;
      return os.str();
    }
    if (leak > options.limits.leakage) {
      os << "Fock leakage " << leak << " at t = " << t;
      return os.str();
    }
    if (options.limits.positivity) {
      const double lam = min_eigenvalue(rho);
      stats.min_eigenvalue = std::min(stats.min_eigenvalue, lam);
      if (lam < options.limits.min_eigenvalue) {
        os << "negative eigenvalue " << lam << " at t = " << t;
        return os.str();
      }
    }
    return {};
  };

  auto abort = [&](const std::string& why, double t, const Eigen::MatrixXcd& r_work) {
    stats.aborted = true;
    stats.abort_reason = why;
    traj.final_state = lab_state(t, r_work);
    throw MonitorAbort("monitor abort: " + why, std::move(traj));
  };

  Eigen::MatrixXcd rho = w_adj * rho0 * w;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);

  const long n_steps = grid.steps();
  const double dt = grid.dt;
  if (auto why = record(grid.t_start, rho); !why.empty()) abort(why, grid.t_start, rho);
  for (long s = 0; s < n_steps; ++s) {
    const double t = grid.t_start + static_cast<double>(s) * dt;
    rhs(t, rho, k1);
    tmp = rho + (0.5 * dt) * k1;
    rhs(t + 0.5 * dt, tmp, k2);
    tmp = rho + (0.5 * dt) * k2;
    rhs(t + 0.5 * dt, tmp, k3);
    tmp = rho + dt * k3;
    rhs(t + dt, tmp, k4);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    ++stats.steps_taken;
    const bool sample = (s + 1) % grid.sample_stride == 0 || s + 1 == n_steps;
    if (sample) stats.max_hermiticity_error = std::max(stats.max_hermiticity_error, hermiticity_error(rho));
    tmp = rho.adjoint();
    rho = 0.5 * (rho + tmp);
    if (sample) {
      const double ts = grid.t_start + static_cast<double>(s + 1) * dt;
      if (auto why = record(ts, rho); !why.empty()) abort(why, ts, rho);
    }
  }
  traj.final_state = lab_state(grid.t_start + static_cast<double>(n_steps) * dt, rho);
  return traj;
}

double max_observable_deviation(const Trajectory& a, const Trajectory& b) {
  std::map<long long, std::size_t> index;
  auto key = [](double t) { return std::llround(t * 1e6); };
  for (std::size_t i = 0; i < b.times.size(); ++i) index[key(b.times[i])] = i;
  double dev = 0.0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    auto it = index.find(key(a.times[i]));
    if (it == index.end()) continue;
    const auto& ra = a.records[i];
    const auto& rb = b.records[it->second];
    dev = std::max({dev, std::abs(ra.mean_n - rb.mean_n), std::abs(ra.p_excited - rb.p_excited)});
  }
  return dev;
}

ConvergenceReport convergence_check(const DensityMatrix& rho0, const SystemParams& p,
                                    const SweepProtocol& protocol, KernelKind kernel,
                                    const TimeGrid& grid, double tolerance, bool with_ratio,
                                    EvolveOptions options) {
  ConvergenceReport report;
  options.store_states = false;
  try {
    if (!(grid.dt > 0.0)) throw InvalidArgument("time step must be positive");
    if (kernel == KernelKind::JcDressed || kernel == KernelKind::RabiDressed) {
      if (!options.rate_table)
        options.rate_table = std::make_shared<const RateTable>(
            kernel_rate_table(kernel, p, HilbertSpace(static_cast<int>(rho0.rows()) / 2)));
    }
    const Trajectory base = evolve(rho0, p, protocol, kernel, grid, options);
    options.enforce_step_bound = false;
    const Trajectory fine = evolve(rho0, p, protocol, kernel, grid.refined(), options);
    report.deviation = max_observable_deviation(base, fine);
    report.passed = report.deviation < tolerance;
    if (with_ratio) {
      TimeGrid coarse = grid;
      coarse.dt *= 2.0;
      if (grid.sample_stride % 2 != 0) throw InvalidArgument("ratio check needs an even sample stride");
      coarse.sample_stride /= 2;
      // The 2 dt run only feeds the error ratio; positivity is not monitored.
      options.limits.positivity = false;
      const Trajectory c = evolve(rho0, p, protocol, kernel, coarse, options);
      report.coarse_deviation = max_observable_deviation(c, base);
      report.ratio = report.deviation > 0.0 ? report.coarse_deviation / report.deviation : 0.0;
      report.passed = report.passed && report.ratio > 8.0;
    }
    std::ostringstream os;
    os << "deviation " << report.deviation;
    if (with_ratio) os << ", coarse deviation " << report.coarse_deviation << ", ratio " << report.ratio;
    report.message = os.str();
  } catch (const MonitorAbort& e) {
    report.passed = false;
    report.message = e.what();
  } catch (const InvalidArgument& e) {
    report.passed = false;
    report.message = e.what();
  }
  return report;
}

}  // namespace lzqed
