#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lzqed/dissipators.hpp"
#include "lzqed/effective.hpp"
#include "lzqed/integrator.hpp"
#include "lzqed/model.hpp"

namespace lzqed {

struct InitialState {
  enum class Kind { Ground, Bare, Coherent };
  Kind kind = Kind::Bare;
  Qubit qubit = Qubit::g;  // bare only
  int n = 0;               // bare only
  cplx alpha{};            // coherent only, qubit in |g>

  bool operator==(const InitialState&) const = default;
};

/// Sweep law in units of |beta|: nu(t) = S (nu0 + nu_rate t) with
/// nu0 = nu0_beta |beta| and nu_rate = nu_rate_beta2 |beta|^2.
struct SweepConfig {
  std::optional<double> eta_center;  // overrides the regime formula
  double nu0_beta = -8.0;
  double nu_rate_beta2 = 0.5;
  int direction = 1;
  /// Exactly one of the two is set. The absolute form (1/omega0) also
  /// works when beta vanishes.
  std::optional<double> t_end_beta = 16.0;
  std::optional<double> t_end;
  double k_range = 8.0;

  bool operator==(const SweepConfig&) const = default;
};

struct OutputConfig {
  std::string path;          // directory for CSV and sidecar
  int fock_columns = 0;      // P_g_n and P_e_n columns for n < fock_columns
  std::vector<Label> dressed_labels;

  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  SystemParams system;
  Regime regime;
  int n_max = 0;  // 0 keeps the dispersive rule
  SweepConfig sweep;
  KernelKind kernel = KernelKind::None;
  InitialState initial;
  int fock_cutoff = 10;
  double dt = 0.025;
  int sample_stride = 100;
  OutputConfig output;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Accepts alternative units: Delta_minus_in_g0 (sets Omega0),
/// eps_Omega_in_Omega0 and kappa/gamma/gamma_phi_in_g0. Unknown keys,
/// missing required keys and invalid values raise ConfigError.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);
/// Canonical form: every quantity in units of omega0.
nlohmann::json to_json(const ScenarioConfig& c);

struct ResolvedScenario {
  ScenarioConfig config;
  DerivedParams derived;
  EffectiveModel model;
  double eta_center = 0.0;
  SweepProtocol protocol;
  TimeGrid grid;
  HilbertSpace space{2};
};

/// Pure: derives beta, eta_center, the protocol and the grid.
ResolvedScenario resolve(const ScenarioConfig& c);
nlohmann::json sidecar(const ResolvedScenario& r);

DensityMatrix initial_density(const ResolvedScenario& r);

struct RunResult {
  ResolvedScenario resolved;
  Trajectory trajectory;
  std::vector<std::string> warnings;
  bool aborted = false;
  std::string abort_reason;
};

/// Never throws MonitorAbort: the partial trajectory is returned with
/// `aborted` set.
RunResult run_scenario(const ScenarioConfig& c);

}  // namespace lzqed
