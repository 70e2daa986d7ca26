#include "lzqed/output.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace lzqed {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void put(std::ostream& os, double v) { os << std::setprecision(9) << v; }

}  // namespace

std::vector<std::string> csv_header(const OutputConfig& output) {
  std::vector<std::string> h = {"t", "beta_t", "mean_n", "mandel_q", "q_valid", "p_e", "leakage"};
  for (int n = 0; n < output.fock_columns; ++n) h.push_back("P_g_" + std::to_string(n));
  for (int n = 0; n < output.fock_columns; ++n) h.push_back("P_e_" + std::to_string(n));
  for (const auto& l : output.dressed_labels) h.push_back("pop_" + l.str());
  return h;
}

void write_csv(std::ostream& os, const Trajectory& traj, double beta_abs, const OutputConfig& output) {
  const auto header = csv_header(output);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const auto& r = traj.records[s];
    put(os, traj.times[s]);
    os << ',';
    put(os, traj.times[s] * beta_abs);
    os << ',';
    put(os, r.mean_n);
    os << ',';
    put(os, r.mandel_q.value);
    os << ',' << (r.mandel_q.valid ? 1 : 0) << ',';
    put(os, r.p_excited);
    os << ',';
    put(os, traj.leakage[s]);
    for (int n = 0; n < output.fock_columns; ++n) {
      os << ',';
      put(os, r.joint_g(n));
    }
    for (int n = 0; n < output.fock_columns; ++n) {
      os << ',';
      put(os, r.joint_e(n));
    }
    for (const auto& l : output.dressed_labels) {
      double v = std::numeric_limits<double>::quiet_NaN();
      for (const auto& [label, pop] : r.dressed_pops)
        if (label == l) v = pop;
      os << ',';
      put(os, v);
    }
    os << '\n';
  }
}

json diagnostics_json(const Diagnostics& d) {
  return {{"max_trace_error", d.max_trace_error},
          {"min_eigenvalue", d.min_eigenvalue},
          {"max_leakage", d.max_leakage},
          {"max_hermiticity_error", d.max_hermiticity_error},
          {"steps_taken", d.steps_taken},
          {"aborted", d.aborted},
          {"abort_reason", d.abort_reason}};
}

json run_sidecar(const RunResult& run) {
  json j = sidecar(run.resolved);
  j["diagnostics"] = diagnostics_json(run.trajectory.diagnostics);
  j["warnings"] = run.warnings;
  j["status"] = run.aborted ? "monitor_abort" : "ok";
  return j;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

WrittenFiles write_run(const RunResult& run, const std::string& dir) {
  const fs::path base = fs::path(dir.empty() ? "." : dir) / run.resolved.config.name;
  std::ostringstream csv;
  write_csv(csv, run.trajectory, std::abs(run.resolved.model.beta), run.resolved.config.output);
  WrittenFiles files{base.string() + ".csv", base.string() + ".json"};
  write_file_atomic(files.csv, csv.str());
  write_file_atomic(files.json, run_sidecar(run).dump(2) + "\n");
  return files;
}

void parallel_for(std::size_t tasks, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, tasks));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

CompareResult compare_kernels(const ScenarioConfig& c, const std::vector<KernelKind>& kernels, unsigned workers) {
  std::vector<KernelKind> distinct;
  for (auto k : kernels)
    if (std::find(distinct.begin(), distinct.end(), k) == distinct.end()) distinct.push_back(k);
  if (distinct.size() < 2) throw ConfigError("compare needs at least two distinct kernels");
  resolve(c);  // fail fast on config errors before spawning work
  CompareResult out;
  out.kernels = distinct;
  out.runs.resize(distinct.size());
  parallel_for(distinct.size(), workers, [&](std::size_t i) {
    ScenarioConfig ci = c;
    ci.kernel = distinct[i];
    out.runs[i] = run_scenario(ci);
  });
  for (std::size_t a = 0; a < distinct.size(); ++a) {
    for (std::size_t b = a + 1; b < distinct.size(); ++b) {
      KernelDeviation d{distinct[a], distinct[b]};
      const auto& ta = out.runs[a].trajectory;
      const auto& tb = out.runs[b].trajectory;
      const std::size_t n = std::min(ta.times.size(), tb.times.size());
      for (std::size_t s = 0; s < n; ++s) {
        d.max_mean_n = std::max(d.max_mean_n, std::abs(ta.records[s].mean_n - tb.records[s].mean_n));
        d.max_p_e = std::max(d.max_p_e, std::abs(ta.records[s].p_excited - tb.records[s].p_excited));
      }
      out.deviations.push_back(d);
    }
  }
  return out;
}

void write_compare_csv(std::ostream& os, const CompareResult& result) {
  os << "t,beta_t";
  for (auto k : result.kernels) {
    const auto s = to_string(k);
    os << ",mean_n_" << s << ",mandel_q_" << s << ",p_e_" << s;
  }
  os << '\n';
  std::size_t n = std::numeric_limits<std::size_t>::max();
  for (const auto& r : result.runs) n = std::min(n, r.trajectory.times.size());
  const double b = std::abs(result.runs.front().resolved.model.beta);
  const auto& times = result.runs.front().trajectory.times;
  for (std::size_t s = 0; s < n; ++s) {
    put(os, times[s]);
    os << ',';
    put(os, times[s] * b);
    for (const auto& r : result.runs) {
      const auto& rec = r.trajectory.records[s];
      os << ',';
      put(os, rec.mean_n);
      os << ',';
      if (rec.mandel_q.valid) put(os, rec.mandel_q.value);
      else os << "nan";
      os << ',';
      put(os, rec.p_excited);
    }
    os << '\n';
  }
}

json compare_summary(const CompareResult& result) {
  json pairs = json::array();
  for (const auto& d : result.deviations)
    pairs.push_back({{"a", to_string(d.a)}, {"b", to_string(d.b)}, {"max_mean_n", d.max_mean_n}, {"max_p_e", d.max_p_e}});
  json runs = json::array();
  for (std::size_t i = 0; i < result.runs.size(); ++i)
    runs.push_back({{"kernel", to_string(result.kernels[i])},
                    {"status", result.runs[i].aborted ? "monitor_abort" : "ok"},
                    {"diagnostics", diagnostics_json(result.runs[i].trajectory.diagnostics)}});
  return {{"deviations", pairs}, {"runs", runs}};
}

namespace {

double parse_number(const std::string& parameter, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(x)) throw ConfigError("scan " + parameter + ": '" + v + "' is not a number");
  return x;
}

ScenarioConfig scan_variant(const ScenarioConfig& c, const std::string& parameter, const std::string& v) {
  ScenarioConfig out = c;
  if (parameter == "eta_center") {
    out.sweep.eta_center = parse_number(parameter, v);
  } else if (parameter == "nu_rate") {
    out.sweep.nu_rate_beta2 = parse_number(parameter, v);
  } else if (parameter == "eps_Omega") {
    out.system.eps_Omega = parse_number(parameter, v);
  } else if (parameter == "kernel") {
    try {
      out.kernel = parse_kernel(v);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("scan kernel: ") + e.what());
    }
  } else {
    throw ConfigError("scan parameter must be eta_center, nu_rate, eps_Omega or kernel, got '" + parameter + "'");
  }
  return out;
}

}  // namespace

std::vector<ScanPoint> sweep_scan(const ScenarioConfig& c, const std::string& parameter,
                                  const std::vector<std::string>& values, const std::string& out_dir,
                                  unsigned workers) {
  if (values.empty()) throw ConfigError("scan needs at least one value");
  std::vector<ScenarioConfig> configs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    configs.push_back(scan_variant(c, parameter, values[i]));
    if (values.size() > 1) configs.back().name = c.name + "_" + std::to_string(i);
    resolve(configs.back());
  }
  std::vector<ScanPoint> points(values.size());
  parallel_for(values.size(), workers, [&](std::size_t i) {
    ScanPoint& pt = points[i];
    pt.value = values[i];
    const RunResult run = run_scenario(configs[i]);
    const auto& recs = run.trajectory.records;
    if (!recs.empty()) {
      pt.final_mean_n = recs.back().mean_n;
      pt.final_p_e = recs.back().p_excited;
      for (const auto& r : recs) pt.max_mean_n = std::max(pt.max_mean_n, r.mean_n);
    }
    pt.aborted = run.aborted;
    pt.error = run.abort_reason;
    if (!out_dir.empty()) write_run(run, out_dir);
  });
  return points;
}

void write_scan_csv(std::ostream& os, const std::string& parameter, const std::vector<ScanPoint>& points) {
  os << parameter << ",final_mean_n,max_mean_n,final_p_e,status\n";
  for (const auto& p : points) {
    os << p.value << ',';
    put(os, p.final_mean_n);
    os << ',';
    put(os, p.max_mean_n);
    os << ',';
    put(os, p.final_p_e);
    os << ',' << (p.aborted ? "monitor_abort" : "ok") << '\n';
  }
}

}  // namespace lzqed
