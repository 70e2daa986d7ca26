#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lzqed/core.hpp"
#include "lzqed/dissipators.hpp"
#include "lzqed/model.hpp"
#include "lzqed/observables.hpp"
#include "lzqed/spectrum.hpp"

namespace lzqed {

/// Uniform grid t_k = t_start + k dt. Observables are recorded every
/// `sample_stride` steps and at the last step.
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  double dt = 0.05;
  int sample_stride = 1;

  long steps() const;
  /// dt > 0, stride >= 1, t_end >= t_start, and dt <= 0.1 / max(omega0, eta_max).
  void validate(double omega0, double eta_max) const;
  /// Half the step with twice the stride: same sample instants.
  TimeGrid refined() const;
};

/// Largest drive frequency reached on [0, t_end].
double max_modulation_frequency(const SweepProtocol& protocol);

struct MonitorLimits {
  double trace = 1e-6;
  double leakage = 1e-4;
  double min_eigenvalue = -1e-6;
  bool positivity = true;
};

struct Diagnostics {
  double max_trace_error = 0.0;
  double min_eigenvalue = 1.0;
  double max_leakage = 0.0;
  double max_hermiticity_error = 0.0;  // before symmetrization
  long steps_taken = 0;
  bool aborted = false;
  std::string abort_reason;
};

/// Propagation frame. Interaction removes the static diagonal of the working
/// basis, exp(iDt) rho exp(-iDt), so RK4 only resolves the coupling and the
/// drive; observables are always taken in the lab frame.
enum class Frame { Interaction, Lab };

struct EvolveOptions {
  MonitorLimits limits;
  Frame frame = Frame::Interaction;
  /// Dressed populations are recorded for these levels when set.
  std::shared_ptr<const DressedSpectrum> projection;
  std::vector<Label> labels;
  bool store_states = false;
  /// Reuse a rate table instead of building one for jc/rabi kernels.
  std::shared_ptr<const RateTable> rate_table;
  bool enforce_step_bound = true;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ObservableBundle> records;
  std::vector<double> leakage;
  std::vector<DensityMatrix> states;  // only with store_states
  DensityMatrix final_state;
  Diagnostics diagnostics;
};

/// Thrown when a monitor trips. Carries everything sampled up to that point.
class MonitorAbort : public std::runtime_error {
 public:
  MonitorAbort(const std::string& what, Trajectory partial)
      : std::runtime_error(what), trajectory(std::move(partial)) {}
  Trajectory trajectory;
};

/// Rate table used by a dressed kernel: JC or Bloch-Siegert complete basis.
RateTable kernel_rate_table(KernelKind kernel, const SystemParams& p, const HilbertSpace& space);

/// RK4 on d rho/dt = -i[H(t), rho] + L rho. rho0 is given in the Fock basis.
Trajectory evolve(const DensityMatrix& rho0, const SystemParams& p, const SweepProtocol& protocol,
                  KernelKind kernel, const TimeGrid& grid, const EvolveOptions& options = {});

/// Largest |difference| of mean_n and p_excited over common sample times.
double max_observable_deviation(const Trajectory& a, const Trajectory& b);

struct ConvergenceReport {
  double deviation = 0.0;         // grid vs grid/2
  double coarse_deviation = 0.0;  // 2 grid vs grid, only with ratio
  double ratio = 0.0;
  bool passed = false;
  std::string message;
};

/// Reruns with dt/2 and compares. With `with_ratio` a 2 dt run is added and
/// the error ratio must exceed 8. Monitor aborts and invalid grids count as
/// failure.
ConvergenceReport convergence_check(const DensityMatrix& rho0, const SystemParams& p,
                                    const SweepProtocol& protocol, KernelKind kernel,
                                    const TimeGrid& grid, double tolerance = 1e-3,
                                    bool with_ratio = false, EvolveOptions options = {});

}  // namespace lzqed
