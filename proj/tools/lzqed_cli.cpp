// lzqed: run, compare and scan sweep scenarios from JSON configs.
//
// Exit codes: 0 success, 1 config error, 2 monitor abort.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lzqed/output.hpp"
#include "lzqed/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kMonitorAbort = 2;

struct Overrides {
  std::string config;
  std::string out;
  std::string kernel;
  std::optional<int> fock_cutoff;
  std::optional<double> dt;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Scenario JSON file")->required();
  cmd->add_option("--out", o.out, "Output directory (overrides output.path)");
  cmd->add_option("--fock-cutoff", o.fock_cutoff, "Number of Fock levels");
  cmd->add_option("--dt", o.dt, "Time step; the sampling interval in time is kept");
}

lzqed::ScenarioConfig load(const Overrides& o) {
  lzqed::ScenarioConfig c = lzqed::load_config(o.config);
  if (!o.kernel.empty()) {
    try {
      c.kernel = lzqed::parse_kernel(o.kernel);
    } catch (const lzqed::InvalidArgument& e) {
      throw lzqed::ConfigError(std::string("--kernel: ") + e.what());
    }
  }
  if (o.fock_cutoff) c.fock_cutoff = *o.fock_cutoff;
  if (o.dt) {
    if (!(*o.dt > 0.0)) throw lzqed::ConfigError("--dt must be positive");
    c.sample_stride = std::max(1, static_cast<int>(std::lround(c.sample_stride * c.dt / *o.dt)));
    c.dt = *o.dt;
  }
  if (!o.out.empty()) c.output.path = o.out;
  if (c.output.path.empty()) c.output.path = ".";
  return c;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int run(const Overrides& o) {
  const auto c = load(o);
  const auto result = lzqed::run_scenario(c);
  const auto files = lzqed::write_run(result, c.output.path);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << files.csv << '\n' << files.json << '\n';
  if (result.aborted) {
    std::cerr << "monitor abort: " << result.abort_reason << '\n';
    return kMonitorAbort;
  }
  return kOk;
}

int compare(const Overrides& o, const std::string& kernels) {
  const auto c = load(o);
  std::vector<lzqed::KernelKind> ks;
  for (const auto& k : split(kernels)) {
    try {
      ks.push_back(lzqed::parse_kernel(k));
    } catch (const lzqed::InvalidArgument& e) {
      throw lzqed::ConfigError(std::string("--kernels: ") + e.what());
    }
  }
  const auto result = lzqed::compare_kernels(c, ks);
  const std::filesystem::path base = std::filesystem::path(c.output.path) / (c.name + "_compare");
  std::ostringstream csv;
  lzqed::write_compare_csv(csv, result);
  lzqed::write_file_atomic(base.string() + ".csv", csv.str());
  const auto summary = lzqed::compare_summary(result);
  lzqed::write_file_atomic(base.string() + ".json", summary.dump(2) + "\n");
  std::cout << summary["deviations"].dump(2) << '\n';
  for (const auto& r : result.runs)
    if (r.aborted) return kMonitorAbort;
  return kOk;
}

int scan(const Overrides& o, const std::string& parameter, const std::string& values, unsigned workers) {
  const auto c = load(o);
  const auto points = lzqed::sweep_scan(c, parameter, split(values), c.output.path, workers);
  std::ostringstream csv;
  lzqed::write_scan_csv(csv, parameter, points);
  lzqed::write_file_atomic((std::filesystem::path(c.output.path) / (c.name + "_scan.csv")).string(), csv.str());
  std::cout << csv.str();
  for (const auto& p : points)
    if (p.aborted) return kMonitorAbort;
  return kOk;
}

int resolve_only(const Overrides& o) {
  const auto c = load(o);
  std::cout << lzqed::sidecar(lzqed::resolve(c)).dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landau-Zener sweeps in a modulated qubit-cavity system"};
  app.require_subcommand(1);

  Overrides run_opts, cmp_opts, scan_opts, res_opts;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario, write CSV and JSON sidecar");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--kernel", run_opts.kernel, "none | ph | jc | rabi");

  std::string kernels = "none,ph,jc,rabi";
  auto* cmp_cmd = app.add_subcommand("compare", "Run several kernels on one scenario");
  add_common(cmp_cmd, cmp_opts);
  cmp_cmd->add_option("--kernels", kernels, "Comma-separated kernel list");

  std::string parameter, values;
  unsigned workers = 0;
  auto* scan_cmd = app.add_subcommand("scan", "Scan one parameter, in parallel");
  add_common(scan_cmd, scan_opts);
  scan_cmd->add_option("--kernel", scan_opts.kernel, "none | ph | jc | rabi");
  scan_cmd->add_option("--parameter", parameter, "eta_center | nu_rate | eps_Omega | kernel")->required();
  scan_cmd->add_option("--values", values, "Comma-separated values")->required();
  scan_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");

  auto* res_cmd = app.add_subcommand("resolve", "Print the resolved parameters without running");
  res_cmd->add_option("--config", res_opts.config, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return run(run_opts);
    if (*cmp_cmd) return compare(cmp_opts, kernels);
    if (*scan_cmd) return scan(scan_opts, parameter, values, workers);
    if (*res_cmd) return resolve_only(res_opts);
  } catch (const lzqed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const lzqed::OutOfRegime& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const lzqed::TruncationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
