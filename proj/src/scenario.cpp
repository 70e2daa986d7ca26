#include "lzqed/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lzqed {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
std::optional<T> get_opt(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<T>(j, where, key);
}

SystemParams parse_system(const json& j) {
  const std::string w = "system";
  check_keys(j, w, {"omega0", "Omega0", "Delta_minus_in_g0", "g0", "eps_Omega", "eps_Omega_in_Omega0",
                    "phi_Omega", "kappa", "kappa_in_g0", "gamma", "gamma_in_g0", "gamma_phi",
                    "gamma_phi_in_g0"});
  SystemParams p;
  p.omega0 = get_opt<double>(j, w, "omega0").value_or(1.0);
  p.g0 = get<double>(j, w, "g0");
  auto exclusive = [&](const char* a, const char* b) {
    if (j.contains(a) && j.contains(b))
      throw ConfigError(w + ": '" + a + "' and '" + b + "' are mutually exclusive");
  };
  exclusive("Omega0", "Delta_minus_in_g0");
  exclusive("eps_Omega", "eps_Omega_in_Omega0");
  exclusive("kappa", "kappa_in_g0");
  exclusive("gamma", "gamma_in_g0");
  exclusive("gamma_phi", "gamma_phi_in_g0");
  if (auto d = get_opt<double>(j, w, "Delta_minus_in_g0")) {
    p.Omega0 = p.omega0 - *d * p.g0;
  } else {
    p.Omega0 = get<double>(j, w, "Omega0");
  }
  if (auto e = get_opt<double>(j, w, "eps_Omega_in_Omega0")) {
    p.eps_Omega = *e * p.Omega0;
  } else {
    p.eps_Omega = get_opt<double>(j, w, "eps_Omega").value_or(0.0);
  }
  p.phi_Omega = get_opt<double>(j, w, "phi_Omega").value_or(0.0);
  auto rate = [&](const char* abs_key, const char* rel_key) {
    if (auto r = get_opt<double>(j, w, rel_key)) return *r * p.g0;
    return get_opt<double>(j, w, abs_key).value_or(0.0);
  };
  p.kappa = rate("kappa", "kappa_in_g0");
  p.gamma = rate("gamma", "gamma_in_g0");
  p.gamma_phi = rate("gamma_phi", "gamma_phi_in_g0");
  try {
    validate(p);
  } catch (const InvalidArgument& e) {
    throw ConfigError(w + ": " + e.what());
  }
  if (!(p.g0 > 0.0)) throw ConfigError("system: scenarios need g0 > 0");
  return p;
}

InitialState parse_initial(const json& j) {
  const std::string w = "initial_state";
  check_keys(j, w, {"type", "qubit", "n", "alpha", "mean_photons"});
  const auto type = get<std::string>(j, w, "type");
  InitialState s;
  if (type == "ground") {
    s.kind = InitialState::Kind::Ground;
  } else if (type == "bare") {
    s.kind = InitialState::Kind::Bare;
    const auto q = get_opt<std::string>(j, w, "qubit").value_or("g");
    if (q != "g" && q != "e") throw ConfigError(w + ".qubit: expected 'g' or 'e'");
    s.qubit = q == "g" ? Qubit::g : Qubit::e;
    s.n = get_opt<int>(j, w, "n").value_or(0);
    if (s.n < 0) throw ConfigError(w + ".n: must be >= 0");
  } else if (type == "coherent") {
    s.kind = InitialState::Kind::Coherent;
    if (j.contains("alpha") && j.contains("mean_photons"))
      throw ConfigError(w + ": 'alpha' and 'mean_photons' are mutually exclusive");
    if (j.contains("mean_photons")) {
      const double m = get<double>(j, w, "mean_photons");
      if (m < 0.0) throw ConfigError(w + ".mean_photons: must be >= 0");
      s.alpha = std::sqrt(m);
    } else {
      const json& a = j.contains("alpha") ? j.at("alpha") : throw ConfigError(w + ": coherent state needs 'alpha'");
      if (a.is_array()) {
        if (a.size() != 2) throw ConfigError(w + ".alpha: expected [re, im]");
        s.alpha = cplx(a[0].get<double>(), a[1].get<double>());
      } else {
        s.alpha = get<double>(j, w, "alpha");
      }
    }
  } else {
    throw ConfigError(w + ".type: expected ground, bare or coherent, got '" + type + "'");
  }
  return s;
}

json initial_to_json(const InitialState& s) {
  switch (s.kind) {
    case InitialState::Kind::Ground: return {{"type", "ground"}};
    case InitialState::Kind::Bare: return {{"type", "bare"}, {"qubit", s.qubit == Qubit::g ? "g" : "e"}, {"n", s.n}};
    case InitialState::Kind::Coherent: return {{"type", "coherent"}, {"alpha", {s.alpha.real(), s.alpha.imag()}}};
  }
  return {};
}

std::string regime_kind_string(const Regime& r) {
  switch (r.kind) {
    case RegimeKind::ResonantPlus: return "resonant+";
    case RegimeKind::ResonantMinus: return "resonant-";
    case RegimeKind::AntiJc: return "anti_jc";
    case RegimeKind::Dce: return "dce";
    case RegimeKind::Sideband: return "sideband";
  }
  return {};
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  check_keys(j, "config", {"name", "system", "regime", "sweep", "kernel", "initial_state", "numerics", "output"});
  ScenarioConfig c;
  c.name = get_opt<std::string>(j, "config", "name").value_or("scenario");
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("config.name: must be a non-empty file stem");
  if (!j.contains("system")) throw ConfigError("config: missing required key 'system'");
  c.system = parse_system(j.at("system"));

  if (!j.contains("regime")) throw ConfigError("config: missing required key 'regime'");
  const json& r = j.at("regime");
  check_keys(r, "regime", {"kind", "m", "n_max"});
  try {
    c.regime = parse_regime(get<std::string>(r, "regime", "kind"), get_opt<int>(r, "regime", "m").value_or(0));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("regime: ") + e.what());
  }
  c.n_max = get_opt<int>(r, "regime", "n_max").value_or(0);
  if (c.n_max < 0) throw ConfigError("regime.n_max: must be >= 0");

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    const std::string w = "sweep";
    check_keys(s, w, {"eta_center", "nu0_beta", "nu_rate_beta2", "direction", "t_end_beta", "t_end", "k_range"});
    c.sweep.eta_center = get_opt<double>(s, w, "eta_center");
    c.sweep.nu0_beta = get_opt<double>(s, w, "nu0_beta").value_or(c.sweep.nu0_beta);
    c.sweep.nu_rate_beta2 = get_opt<double>(s, w, "nu_rate_beta2").value_or(c.sweep.nu_rate_beta2);
    c.sweep.direction = get_opt<int>(s, w, "direction").value_or(1);
    if (c.sweep.direction != 1 && c.sweep.direction != -1) throw ConfigError("sweep.direction: must be +1 or -1");
    c.sweep.k_range = get_opt<double>(s, w, "k_range").value_or(c.sweep.k_range);
    if (s.contains("t_end_beta") && s.contains("t_end"))
      throw ConfigError("sweep: 't_end_beta' and 't_end' are mutually exclusive");
    c.sweep.t_end = get_opt<double>(s, w, "t_end");
    c.sweep.t_end_beta = c.sweep.t_end ? std::nullopt : get_opt<double>(s, w, "t_end_beta");
    if (!c.sweep.t_end && !c.sweep.t_end_beta) throw ConfigError("sweep: needs 't_end_beta' or 't_end'");
    if ((c.sweep.t_end && *c.sweep.t_end < 0.0) || (c.sweep.t_end_beta && *c.sweep.t_end_beta < 0.0))
      throw ConfigError("sweep: end time must be >= 0");
  }

  try {
    c.kernel = parse_kernel(get_opt<std::string>(j, "config", "kernel").value_or("none"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("kernel: ") + e.what());
  }
  if (j.contains("initial_state")) c.initial = parse_initial(j.at("initial_state"));

  if (j.contains("numerics")) {
    const json& n = j.at("numerics");
    check_keys(n, "numerics", {"fock_cutoff", "dt", "sample_stride"});
    c.fock_cutoff = get_opt<int>(n, "numerics", "fock_cutoff").value_or(c.fock_cutoff);
    c.dt = get_opt<double>(n, "numerics", "dt").value_or(c.dt);
    c.sample_stride = get_opt<int>(n, "numerics", "sample_stride").value_or(c.sample_stride);
  }
  if (c.fock_cutoff < 4) throw ConfigError("numerics.fock_cutoff: must be >= 4");
  if (!(c.dt > 0.0)) throw ConfigError("numerics.dt: must be > 0");
  if (c.sample_stride < 1) throw ConfigError("numerics.sample_stride: must be >= 1");

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"path", "fock_columns", "dressed_labels"});
    c.output.path = get_opt<std::string>(o, "output", "path").value_or("");
    c.output.fock_columns = get_opt<int>(o, "output", "fock_columns").value_or(0);
    if (c.output.fock_columns < 0 || c.output.fock_columns > c.fock_cutoff)
      throw ConfigError("output.fock_columns: must lie in [0, fock_cutoff]");
    for (const auto& l : get_opt<std::vector<std::string>>(o, "output", "dressed_labels").value_or(std::vector<std::string>{})) {
      try {
        c.output.dressed_labels.push_back(Label::parse(l));
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("output.dressed_labels: ") + e.what());
      }
    }
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const ScenarioConfig& c) {
  const SystemParams& p = c.system;
  json sweep = {{"nu0_beta", c.sweep.nu0_beta},
                {"nu_rate_beta2", c.sweep.nu_rate_beta2},
                {"direction", c.sweep.direction},
                {"k_range", c.sweep.k_range}};
  if (c.sweep.eta_center) sweep["eta_center"] = *c.sweep.eta_center;
  if (c.sweep.t_end) sweep["t_end"] = *c.sweep.t_end;
  if (c.sweep.t_end_beta) sweep["t_end_beta"] = *c.sweep.t_end_beta;
  json labels = json::array();
  for (const auto& l : c.output.dressed_labels) labels.push_back(l.str());
  json regime = {{"kind", regime_kind_string(c.regime)}};
  if (c.regime.kind == RegimeKind::Sideband) regime["m"] = c.regime.m;
  if (c.n_max > 0) regime["n_max"] = c.n_max;
  return {
      {"name", c.name},
      {"system",
       {{"omega0", p.omega0},
        {"Omega0", p.Omega0},
        {"g0", p.g0},
        {"eps_Omega", p.eps_Omega},
        {"phi_Omega", p.phi_Omega},
        {"kappa", p.kappa},
        {"gamma", p.gamma},
        {"gamma_phi", p.gamma_phi}}},
      {"regime", regime},
      {"sweep", sweep},
      {"kernel", to_string(c.kernel)},
      {"initial_state", initial_to_json(c.initial)},
      {"numerics", {{"fock_cutoff", c.fock_cutoff}, {"dt", c.dt}, {"sample_stride", c.sample_stride}}},
      {"output", {{"path", c.output.path}, {"fock_columns", c.output.fock_columns}, {"dressed_labels", labels}}},
  };
}

ResolvedScenario resolve(const ScenarioConfig& c) {
  ResolvedScenario r;
  r.config = c;
  r.derived = derive(c.system);
  r.space = HilbertSpace(c.fock_cutoff);
  try {
    r.model = build_effective(c.system, c.regime, c.n_max);
    r.eta_center = c.sweep.eta_center ? *c.sweep.eta_center : resonance_eta(c.system, c.regime);
  } catch (const OutOfRegime& e) {
    throw ConfigError(e.what());
  }
  const double b = std::abs(r.model.beta);
  try {
    if (c.sweep.t_end_beta) {
      if (!(b > 0.0)) throw ConfigError("sweep: t_end_beta needs a nonzero beta; give t_end instead");
      r.protocol = make_sweep(r.eta_center, b, c.sweep.nu0_beta, c.sweep.nu_rate_beta2, c.sweep.direction,
                              *c.sweep.t_end_beta, c.sweep.k_range);
    } else if (b > 0.0) {
      r.protocol = make_sweep(r.eta_center, b, c.sweep.nu0_beta, c.sweep.nu_rate_beta2, c.sweep.direction,
                              *c.sweep.t_end * b, c.sweep.k_range);
      r.protocol.t_end = *c.sweep.t_end;
    } else {
      r.protocol = SweepProtocol{r.eta_center, 0.0, 0.0, c.sweep.direction, *c.sweep.t_end, c.sweep.k_range};
    }
    r.grid = TimeGrid{0.0, r.protocol.t_end, c.dt, c.sample_stride};
    r.grid.validate(c.system.omega0, max_modulation_frequency(r.protocol));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  const int needed = std::max(c.regime.kind == RegimeKind::Sideband ? c.regime.m : 2, r.model.n_max);
  if (needed + 2 >= c.fock_cutoff) {
    std::ostringstream os;
    os << "numerics.fock_cutoff: " << c.fock_cutoff << " is too small for a model reaching n = " << needed;
    throw ConfigError(os.str());
  }
  return r;
}

json sidecar(const ResolvedScenario& r) {
  const DerivedParams& d = r.derived;
  json derived = {{"Delta_plus", d.Delta_plus},
                  {"Delta_minus", d.Delta_minus},
                  {"delta_plus", d.delta_plus},
                  {"delta_minus", d.delta_minus ? json(*d.delta_minus) : json(nullptr)},
                  {"Lambda", d.Lambda},
                  {"xi", d.xi},
                  {"alpha", d.alpha_kerr ? json(*d.alpha_kerr) : json(nullptr)},
                  {"D_sign", d.D_sign}};
  json basis = json::array();
  for (const auto& l : r.model.basis) basis.push_back(l.str());
  const double b = std::abs(r.model.beta);
  json out = {
      {"name", r.config.name},
      {"config", to_json(r.config)},
      {"derived", derived},
      {"beta", {{"re", r.model.beta.real()}, {"im", r.model.beta.imag()}, {"abs", b}}},
      {"eta_center", r.eta_center},
      {"regime", to_string(r.config.regime)},
      {"n_max", r.model.n_max},
      {"effective_basis", basis},
      {"protocol",
       {{"nu0", r.protocol.nu0},
        {"nu_rate", r.protocol.nu_rate},
        {"direction", r.protocol.direction},
        {"t_end", r.protocol.t_end},
        {"k_range", r.protocol.k_range}}},
      {"grid",
       {{"dt", r.grid.dt}, {"steps", r.grid.steps()}, {"sample_stride", r.grid.sample_stride}, {"t_end", r.grid.t_end}}},
  };
  if (r.protocol.nu_rate != 0.0 && b > 0.0) {
    // Coupling of the swept pair: sqrt(m)/2 beta for the sideband ladder.
    double coupling = b;
    if (r.config.regime.kind == RegimeKind::Sideband) coupling *= std::sqrt(static_cast<double>(r.config.regime.m)) / 2.0;
    out["lz_probability"] = lz_probability(coupling, r.protocol.nu_rate);
  }
  return out;
}

DensityMatrix initial_density(const ResolvedScenario& r) {
  const InitialState& s = r.config.initial;
  switch (s.kind) {
    case InitialState::Kind::Ground: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(bare_hamiltonian(r.config.system, r.space));
      return pure_state(es.eigenvectors().col(0));
    }
    case InitialState::Kind::Bare:
      if (s.n >= r.space.fock_cutoff()) throw ConfigError("initial_state.n: outside the Fock truncation");
      return pure_state(basis_state(r.space, s.qubit, s.n));
    case InitialState::Kind::Coherent:
      try {
        return coherent_state(r.space, s.alpha);
      } catch (const TruncationError& e) {
        throw ConfigError(std::string("initial_state: ") + e.what());
      }
  }
  throw ConfigError("initial_state: unknown type");
}

RunResult run_scenario(const ScenarioConfig& c) {
  RunResult out;
  out.resolved = resolve(c);
  const ResolvedScenario& r = out.resolved;
  EvolveOptions options;
  if (!c.output.dressed_labels.empty()) {
    int top = 0;
    for (const auto& l : c.output.dressed_labels) top = std::max(top, l.n);
    if (top + 2 >= c.fock_cutoff) throw ConfigError("output.dressed_labels: level outside the Fock truncation");
    options.projection = std::make_shared<const DressedSpectrum>(bloch_siegert_spectrum(c.system, r.space, top));
    for (const auto& l : c.output.dressed_labels) {
      if (!options.projection->find(l)) throw ConfigError("output.dressed_labels: unknown level " + l.str());
    }
    options.labels = c.output.dressed_labels;
  }
  if (c.kernel == KernelKind::JcDressed || c.kernel == KernelKind::RabiDressed) {
    options.rate_table = std::make_shared<const RateTable>(kernel_rate_table(c.kernel, c.system, r.space));
    out.warnings = options.rate_table->warnings;
  }
  try {
    out.trajectory = evolve(initial_density(r), c.system, r.protocol, c.kernel, r.grid, options);
  } catch (const MonitorAbort& e) {
    out.trajectory = e.trajectory;
    out.aborted = true;
    out.abort_reason = out.trajectory.diagnostics.abort_reason;
  }
  return out;
}

}  // namespace lzqed
