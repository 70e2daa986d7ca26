// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "lzqed/dissipators.hpp"
#include "lzqed/effective.hpp"
#include "lzqed/integrator.hpp"
#include "lzqed/observables.hpp"
#include "lzqed/output.hpp"
#include "lzqed/scenario.hpp"
#include "lzqed/spectrum.hpp"
#include "oracles/oracles.hpp"

using namespace lzqed;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string scenario(const std::string& name) { return std::string(LZQED_SCENARIO_DIR) + "/" + name + ".json"; }

SystemParams paper_params(double delta_minus_in_g0, double g0 = 0.04) {
  SystemParams p;
  p.g0 = g0;
  p.Omega0 = 1.0 - delta_minus_in_g0 * 0.04;
  return p;
}

// 1. Trace, Hermiticity and ground-state stationarity of every kernel.
Outcome lindblad_sanity() {
  const int n = 8;
  const HilbertSpace space = build_space(n);
  SystemParams p = paper_params(0.0);
  p.eps_Omega = 0.01;
  p.kappa = 4e-6;
  p.gamma = p.gamma_phi = 2.8e-5;
  SweepProtocol s;
  s.eta_center = 2.0 + p.g0 * std::sqrt(2.0);

  const RateTable jc = kernel_rate_table(KernelKind::JcDressed, p, space);
  const RateTable rabi = kernel_rate_table(KernelKind::RabiDressed, p, space);
  struct Kernel {
    const char* name;
    std::function<DensityMatrix(const DensityMatrix&)> apply;
    StateVector ground;
  };
  const std::vector<Kernel> kernels{
      {"ph", [&](const DensityMatrix& r) { return apply_phenomenological(r, p, space); },
       basis_state(space, Qubit::g, 0)},
      {"jc", [&](const DensityMatrix& r) { return apply_dressed(r, jc); }, jc.basis.at(Label::ground()).vector},
      {"rabi", [&](const DensityMatrix& r) { return apply_dressed(r, rabi); }, rabi.basis.at(Label::ground()).vector}};

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> when(0.0, 1e5);
  double trace = 0.0, herm = 0.0, ground = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = oracle::random_density(space.dim(), rng, 1 + trial % space.dim());
    const Operator h = rabi_hamiltonian(p, s, when(rng), space);
    const DensityMatrix unitary = cplx(0.0, -1.0) * (h * rho - rho * h);
    for (const Kernel& k : kernels) {
      const DensityMatrix rhs = unitary + k.apply(rho);
      trace = std::max(trace, std::abs(rhs.trace()));
      herm = std::max(herm, hermiticity_error(rhs));
    }
  }
  for (const Kernel& k : kernels) ground = std::max(ground, k.apply(pure_state(k.ground)).cwiseAbs().maxCoeff());
  const bool pass = trace < 1e-12 && herm < 1e-12 && ground < 1e-12;
  return {pass, fmt("max |tr| %.1e, max hermiticity %.1e, ground drift %.1e (limit 1e-12)", trace, herm, ground)};
}

double bs_error(const SystemParams& p) {
  const int n = 16;
  const DressedSpectrum bs = bloch_siegert_spectrum(p, build_space(n), 10);
  std::vector<double> approx;
  for (const Level& l : bs.levels) approx.push_back(l.energy);
  std::sort(approx.begin(), approx.end());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::rabi(n, p.omega0, p.Omega0, p.g0));
  double err = 0.0;
  for (int i = 0; i < 8; ++i) err = std::max(err, std::abs(approx[static_cast<std::size_t>(i)] - es.eigenvalues()(i)));
  return err;
}

// 2. Analytic spectrum against dense diagonalization.
Outcome spectrum_oracle() {
  bool pass = true;
  std::string detail;
  for (double dm : {0.0, 9.0, 10.0}) {
    const double e1 = bs_error(paper_params(dm, 0.04));
    const double e2 = bs_error(paper_params(dm, 0.02));
    pass = pass && e1 < 1e-3 && e1 / e2 > 3.0;
    detail += fmt("%sDelta_-=%g g0: err %.2e, ratio %.2f", detail.empty() ? "" : "; ", dm, e1, e1 / e2);
  }
  return {pass, detail + " (limits 1e-3, > 3)"};
}

// 3. beta/alpha for the fig3 and fig4 scenarios.
Outcome beta_over_alpha() {
  const ResolvedScenario r = resolve(load_config(scenario("fig3")));
  const double ratio = std::abs(r.model.beta) / r.model.alpha_kerr;
  return {std::abs(ratio - 0.89) <= 0.02,
          fmt("beta %.4e, alpha %.4e, beta/alpha %.4f (target 0.89 +- 0.02)", std::abs(r.model.beta), r.model.alpha_kerr, ratio)};
}

ScenarioConfig fig1(KernelKind kernel, double t_end_beta, int stride) {
  ScenarioConfig c = load_config(scenario("fig1"));
  c.kernel = kernel;
  c.sweep.t_end_beta = t_end_beta;
  c.sample_stride = stride;
  return c;
}

double pop(const ObservableBundle& b, const Label& l) {
  for (const auto& [label, value] : b.dressed_pops)
    if (label == l) return value;
  return NAN;
}

// 4. Unitary LZ transfer on fig1 and agreement with the two-level model.
Outcome lz_transfer() {
  ScenarioConfig c = fig1(KernelKind::None, 16.0, 400);
  c.initial.kind = InitialState::Kind::Ground;
  const RunResult run = run_scenario(c);
  if (run.aborted) return {false, "full run aborted: " + run.abort_reason};
  const auto& recs = run.trajectory.records;
  const double transfer = pop(recs.back(), Label::plus(2));

  const ResolvedScenario& r = run.resolved;
  EffectiveModel model = r.model;
  calibrate_detuning(model, exact_spectrum(r.config.system, r.space), r.eta_center);
  const EffectiveTrajectory eff =
      evolve_effective(model, r.protocol, effective_basis_state(model, Label::ground()), r.grid);
  if (eff.times.size() != recs.size()) return {false, "effective and full sample grids differ"};
  double worst = 0.0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const Eigen::VectorXd pe = eff.populations(i);
    worst = std::max(worst, std::abs(pe(model.index_of(Label::ground())) - pop(recs[i], Label::ground())));
    worst = std::max(worst, std::abs(pe(model.index_of(Label::plus(2))) - pop(recs[i], Label::plus(2))));
  }
  const bool pass = transfer >= 0.90 && worst < 0.05;
  return {pass, fmt("transfer to 2+ %.4f (>= 0.90), effective vs full max deviation %.4f (< 0.05), %ld steps", transfer,
                    worst, run.trajectory.diagnostics.steps_taken)};
}

struct KernelRuns {
  CompareResult result;
  bool ok = false;
  std::string error;
};

KernelRuns fig1_kernels() {
  KernelRuns k;
  try {
    k.result = compare_kernels(fig1(KernelKind::RabiDressed, 10.0, 400),
                               {KernelKind::RabiDressed, KernelKind::JcDressed, KernelKind::Phenomenological}, 1);
    k.ok = true;
    for (const RunResult& r : k.result.runs)
      if (r.aborted) {
        k.ok = false;
        k.error = r.abort_reason;
      }
  } catch (const std::exception& e) {
    k.error = e.what();
  }
  return k;
}

double photons_one_or_two(const ObservableBundle& b) { return b.fock_dist(1) + b.fock_dist(2); }

// 5. One or two photons with about 70 % probability at beta t = 10.
Outcome fig1_statistics(const KernelRuns& k) {
  if (!k.ok) return {false, "kernel runs failed: " + k.error};
  const double rabi = photons_one_or_two(k.result.runs[0].trajectory.records.back());
  const double jc = photons_one_or_two(k.result.runs[1].trajectory.records.back());
  const bool pass = std::abs(rabi - 0.70) <= 0.10 && std::abs(jc - 0.70) <= 0.10;
  return {pass, fmt("P(1)+P(2) at beta t = 10: rabi %.4f, jc %.4f (target 0.70 +- 0.10)", rabi, jc)};
}

struct Peak {
  double where = 0.0, height = 0.0, tail = 0.0;
};

Peak peak_of(const RunResult& r) {
  const auto& recs = r.trajectory.records;
  const double beta = std::abs(r.resolved.model.beta);
  Peak p;
  std::size_t tail_n = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].mean_n > p.height) {
      p.height = recs[i].mean_n;
      p.where = beta * r.trajectory.times[i];
    }
    if (i >= recs.size() * 4 / 5) {
      p.tail += recs[i].mean_n;
      ++tail_n;
    }
  }
  p.tail /= static_cast<double>(tail_n);
  return p;
}

// 6. jc and rabi kernels nearly indistinguishable; ph qualitatively similar.
Outcome kernel_agreement(const KernelRuns& k) {
  if (!k.ok) return {false, "kernel runs failed: " + k.error};
  const auto& rabi = k.result.runs[0];
  const auto& jc = k.result.runs[1];
  const auto& ph = k.result.runs[2];
  double dev = 0.0;
  for (std::size_t i = 0; i < rabi.trajectory.records.size(); ++i)
    dev = std::max(dev, std::abs(rabi.trajectory.records[i].mean_n - jc.trajectory.records[i].mean_n));
  const Peak pj = peak_of(jc), pp = peak_of(ph);
  const bool same_peak = std::abs(pp.where - pj.where) <= 0.1 * pj.where;
  const double tail_ratio = pp.tail / pj.tail;
  const bool same_trend = tail_ratio > 0.8 && tail_ratio < 1.25 && pp.tail <= pp.height && pj.tail <= pj.height;
  const bool pass = dev < 0.05 && same_peak && same_trend;
  return {pass, fmt("max |<n>_jc - <n>_rabi| %.4f (< 0.05); <n> peak at beta t %.2f (ph) vs %.2f (jc); "
                    "late-window ph/jc ratio %.3f",
                    dev, pp.where, pj.where, tail_ratio)};
}

// 7. Sequential sideband transfers on fig5, averaged over the fast
// dispersive oscillation of P_{g,n}.
Outcome sideband_sequence() {
  ScenarioConfig c = load_config(scenario("fig5"));
  c.kernel = KernelKind::None;
  c.sample_stride = static_cast<int>(std::lround(5.0 / c.dt));
  c.output.fock_columns = 10;
  const RunResult run = run_scenario(c);
  if (run.aborted) return {false, "run aborted: " + run.abort_reason};
  const auto& recs = run.trajectory.records;
  const double beta = std::abs(run.resolved.model.beta);
  const double end = beta * run.trajectory.times.back();
  auto window_mean = [&](int n, double from, double to) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const double bt = beta * run.trajectory.times[i];
      if (bt >= from && bt <= to) {
        sum += recs[i].joint_g(n);
        ++count;
      }
    }
    return sum / count;
  };
  // First beta t at which the 1 beta t running mean falls below half the baseline.
  auto fall_time = [&](int n, double baseline) {
    for (double bt = 0.0; bt + 1.0 <= end; bt += 0.25)
      if (window_mean(n, bt, bt + 1.0) < 0.5 * baseline) return bt + 0.5;
    return std::numeric_limits<double>::infinity();
  };

  bool pass = true;
  std::string detail = "final/initial P_g,n:";
  double previous = -1.0;
  for (int n = 4; n >= 1; --n) {
    const double base = window_mean(n, 0.0, 2.0);
    const double last = window_mean(n, end - 2.0, end);
    const double fall = fall_time(n, base);
    const bool ordered = fall > previous;
    previous = fall;
    pass = pass && last < 0.1 * base && ordered;
    detail += fmt(" n=%d %.3f (falls at beta t %.1f)", n, last / base, fall);
  }
  double spectator = 0.0;
  for (int n = 5; n <= 9; ++n) {
    const double base = window_mean(n, 0.0, 2.0);
    spectator = std::max(spectator, std::abs(window_mean(n, end - 2.0, end) / base - 1.0));
  }
  pass = pass && spectator < 0.05;

  const EffectiveModel& m = run.resolved.model;
  const double lz1 = 1.0 - lz_probability(0.5 * m.beta, run.resolved.protocol.nu_rate);
  detail += fmt("; n=5..9 max relative change %.3f (< 0.05); LZ residual for n=1 %.3f, n=2 %.3f", spectator, lz1,
                1.0 - lz_probability(std::sqrt(2.0) / 2.0 * m.beta, run.resolved.protocol.nu_rate));
  return {pass, detail};
}

// 8. Mandel Q reference values.
Outcome mandel_suite() {
  const HilbertSpace space = build_space(40);
  const MandelQ coh = mandel_q(coherent_state(space, std::sqrt(4.5)), space);
  const MandelQ fock = mandel_q(pure_state(basis_state(space, Qubit::g, 3)), space);
  double svs = 0.0;
  for (double r : {0.2, 0.5, 0.8}) {
    const std::vector<double> p = oracle::squeezed_vacuum_distribution(r, 100);
    const HilbertSpace big = build_space(static_cast<int>(p.size()));
    DensityMatrix rho = DensityMatrix::Zero(big.dim(), big.dim());
    for (std::size_t k = 0; k < p.size(); ++k) {
      const int i = big.index(Qubit::g, static_cast<int>(k));
      rho(i, i) = p[k];
    }
    const double mean = std::sinh(r) * std::sinh(r);
    svs = std::max(svs, std::abs(mandel_q(rho, big).value - (1.0 + 2.0 * mean)));
  }
  const bool pass = coh.valid && std::abs(coh.value) < 1e-6 && std::abs(fock.value + 1.0) < 1e-12 && svs < 1e-3;
  return {pass, fmt("coherent %.1e (0 +- 1e-6), Fock %.6f (-1), squeezed vacuum max error %.1e (< 1e-3)", coh.value,
                    fock.value, svs)};
}

// 9. RK4 self-convergence on the full fig1 scenario.
Outcome self_convergence() {
  ScenarioConfig c = load_config(scenario("fig1"));
  c.sample_stride = 400;
  const ResolvedScenario r = resolve(c);
  const ConvergenceReport rep =
      convergence_check(initial_density(r), r.config.system, r.protocol, r.config.kernel, r.grid, 1e-3, true);
  const bool pass = rep.passed && rep.ratio > 8.0;
  std::string detail = fmt("dt %.3f vs dt/2 deviation %.2e (< 1e-3), error ratio %.1f (> 8)", r.grid.dt, rep.deviation,
                           rep.ratio);
  if (!rep.message.empty()) detail += "; " + rep.message;
  return {pass, detail};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& body) {
    const auto start = clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "Lindblad sanity", lindblad_sanity);
  report(2, "Spectrum oracle", spectrum_oracle);
  report(3, "beta/alpha cross-check", beta_over_alpha);
  report(4, "LZ transfer (unitary, fig1)", lz_transfer);
  KernelRuns kernels;
  bool have_kernels = false;
  auto runs = [&]() -> const KernelRuns& {
    if (!have_kernels) {
      kernels = fig1_kernels();
      have_kernels = true;
    }
    return kernels;
  };
  report(5, "fig1 dissipative statistics", [&] { return fig1_statistics(runs()); });
  report(6, "Kernel agreement", [&] { return kernel_agreement(runs()); });
  report(7, "fig5 sideband sequence (unitary)", sideband_sequence);
  report(8, "Mandel-Q properties", mandel_suite);
  report(9, "Integrator self-convergence", self_convergence);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
