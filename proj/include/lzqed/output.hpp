#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lzqed/scenario.hpp"

namespace lzqed {

/// t, beta_t, mean_n, mandel_q, q_valid, p_e, leakage, then P_g_<n>, P_e_<n>
/// for n < fock_columns and pop_<label> per dressed label.
std::vector<std::string> csv_header(const OutputConfig& output);
void write_csv(std::ostream& os, const Trajectory& traj, double beta_abs, const OutputConfig& output);

nlohmann::json diagnostics_json(const Diagnostics& d);
/// Sidecar with diagnostics, warnings and abort status.
nlohmann::json run_sidecar(const RunResult& run);

struct WrittenFiles {
  std::string csv;
  std::string json;
};

/// Writes <dir>/<name>.csv and <dir>/<name>.json. Each file is written to a
/// temporary name first and renamed into place.
WrittenFiles write_run(const RunResult& run, const std::string& dir);

/// Write to a temporary sibling, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

struct KernelDeviation {
  KernelKind a, b;
  double max_mean_n = 0.0;
  double max_p_e = 0.0;
};

struct CompareResult {
  std::vector<KernelKind> kernels;
  std::vector<RunResult> runs;
  std::vector<KernelDeviation> deviations;  // every pair
};

/// One run per kernel on the same grid. Needs at least two distinct kernels.
CompareResult compare_kernels(const ScenarioConfig& c, const std::vector<KernelKind>& kernels,
                              unsigned workers = 0);
/// t, beta_t, then mean_n_<k>, mandel_q_<k>, p_e_<k> per kernel.
void write_compare_csv(std::ostream& os, const CompareResult& result);
nlohmann::json compare_summary(const CompareResult& result);

struct ScanPoint {
  std::string value;
  double final_mean_n = 0.0;
  double max_mean_n = 0.0;
  double final_p_e = 0.0;
  bool aborted = false;
  std::string error;
};

/// parameter is one of eta_center (absolute), nu_rate (units of beta^2),
/// eps_Omega (absolute) or kernel. Points run in parallel; the result order
/// follows `values`. With a non-empty out_dir each point is also written as
/// <name>_<index>.csv/json.
std::vector<ScanPoint> sweep_scan(const ScenarioConfig& c, const std::string& parameter,
                                  const std::vector<std::string>& values, const std::string& out_dir = "",
                                  unsigned workers = 0);
void write_scan_csv(std::ostream& os, const std::string& parameter, const std::vector<ScanPoint>& points);

/// Maps `tasks` indices onto up to `workers` threads (0 = hardware
/// concurrency).
void parallel_for(std::size_t tasks, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace lzqed
