#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lzqed/effective.hpp"
#include "lzqed/output.hpp"
#include "lzqed/scenario.hpp"

namespace py = pybind11;
using namespace lzqed;

namespace {

struct PyTrajectory {
  Eigen::VectorXd t, mean_n, mandel_q, p_e, leakage;
  Eigen::Matrix<bool, Eigen::Dynamic, 1> q_valid;
  Eigen::MatrixXd fock_dist;  // samples x N
  std::string status;
  std::string sidecar;
};

PyTrajectory convert(const Trajectory& tr) {
  PyTrajectory out;
  const auto n = static_cast<Eigen::Index>(tr.times.size());
  out.t.resize(n);
  out.mean_n.resize(n);
  out.mandel_q.resize(n);
  out.p_e.resize(n);
  out.leakage.resize(n);
  out.q_valid.resize(n);
  const auto nf = n > 0 ? tr.records.front().fock_dist.size() : 0;
  out.fock_dist.resize(n, nf);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = tr.records[static_cast<std::size_t>(i)];
    out.t(i) = tr.times[static_cast<std::size_t>(i)];
    out.mean_n(i) = r.mean_n;
    out.mandel_q(i) = r.mandel_q.value;
    out.q_valid(i) = r.mandel_q.valid;
    out.p_e(i) = r.p_excited;
    out.leakage(i) = tr.leakage[static_cast<std::size_t>(i)];
    out.fock_dist.row(i) = r.fock_dist.transpose();
  }
  out.status = tr.diagnostics.aborted ? "monitor_abort" : "ok";
  return out;
}

ScenarioConfig config_from(const std::string& text) {
  try {
    return parse_config(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core routines of lzqed";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<OutOfRegime>(m, "OutOfRegime", PyExc_ValueError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_ValueError);
  py::register_exception<LabelAmbiguity>(m, "LabelAmbiguity", PyExc_RuntimeError);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](double omega0, double Omega0, double g0, double eps_Omega, double phi_Omega, double kappa,
                       double gamma, double gamma_phi) {
             return SystemParams{omega0, Omega0, g0, eps_Omega, phi_Omega, kappa, gamma, gamma_phi};
           }),
           py::arg("omega0") = 1.0, py::arg("Omega0") = 1.0, py::arg("g0") = 0.04, py::arg("eps_Omega") = 0.0,
           py::arg("phi_Omega") = 0.0, py::arg("kappa") = 0.0, py::arg("gamma") = 0.0, py::arg("gamma_phi") = 0.0)
      .def_readwrite("omega0", &SystemParams::omega0)
      .def_readwrite("Omega0", &SystemParams::Omega0)
      .def_readwrite("g0", &SystemParams::g0)
      .def_readwrite("eps_Omega", &SystemParams::eps_Omega)
      .def_readwrite("phi_Omega", &SystemParams::phi_Omega)
      .def_readwrite("kappa", &SystemParams::kappa)
      .def_readwrite("gamma", &SystemParams::gamma)
      .def_readwrite("gamma_phi", &SystemParams::gamma_phi);

  py::class_<Label>(m, "Label")
      .def_readonly("n", &Label::n)
      .def_readonly("sign", &Label::sign)
      .def("__str__", &Label::str)
      .def("__repr__", [](const Label& l) { return "Label('" + l.str() + "')"; });

  m.def("derive", [](const SystemParams& p) {
    const DerivedParams d = derive(p);
    py::dict out;
    out["Delta_plus"] = d.Delta_plus;
    out["Delta_minus"] = d.Delta_minus;
    out["delta_plus"] = d.delta_plus;
    out["delta_minus"] = d.delta_minus ? py::cast(*d.delta_minus) : py::none();
    out["Lambda"] = d.Lambda;
    out["xi"] = d.xi;
    out["alpha"] = d.alpha_kerr ? py::cast(*d.alpha_kerr) : py::none();
    out["D_sign"] = d.D_sign;
    return out;
  });

  auto energies = [](const DressedSpectrum& s) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& l : s.levels) out.emplace_back(l.label.str(), l.energy);
    return out;
  };
  m.def("bloch_siegert_energies",
        [energies](const SystemParams& p, int fock_cutoff, int n_max) {
          return energies(bloch_siegert_spectrum(p, HilbertSpace(fock_cutoff), n_max));
        },
        py::arg("params"), py::arg("fock_cutoff"), py::arg("n_max"),
        "Labelled Bloch-Siegert energies sorted ascending.");
  m.def("jc_energies",
        [energies](const SystemParams& p, int fock_cutoff, int n_max) {
          return energies(jc_spectrum(p, HilbertSpace(fock_cutoff), n_max));
        },
        py::arg("params"), py::arg("fock_cutoff"), py::arg("n_max"));
  m.def("exact_energies",
        [energies](const SystemParams& p, int fock_cutoff) {
          return energies(exact_spectrum(p, HilbertSpace(fock_cutoff)));
        },
        py::arg("params"), py::arg("fock_cutoff"));

  m.def("resonance_eta",
        [](const SystemParams& p, const std::string& regime, int m_index) {
          return resonance_eta(p, parse_regime(regime, m_index));
        },
        py::arg("params"), py::arg("regime"), py::arg("m") = 0);

  m.def("build_effective",
        [](const SystemParams& p, const std::string& regime, int m_index) {
          const EffectiveModel model = build_effective(p, parse_regime(regime, m_index));
          py::dict out;
          std::vector<std::string> basis;
          for (const auto& l : model.basis) basis.push_back(l.str());
          out["basis"] = basis;
          out["beta"] = model.beta;
          out["alpha"] = model.alpha_kerr;
          out["n_max"] = model.n_max;
          out["hamiltonian_at_zero"] = Eigen::MatrixXcd(model.hamiltonian(0.0));
          return out;
        },
        py::arg("params"), py::arg("regime"), py::arg("m") = 0);

  m.def("lz_probability", [](cplx beta, double nu_rate) { return lz_probability(beta, nu_rate); },
        py::arg("beta"), py::arg("nu_rate"));

  m.def("mandel_q_from_distribution",
        [](const Eigen::VectorXd& p) -> py::object {
          const MandelQ q = mandel_q_from_distribution(p);
          if (!q.valid) return py::none();
          return py::cast(q.value);
        },
        py::arg("photon_probabilities"), "Mandel Q, or None for the vacuum.");

  py::class_<PyTrajectory>(m, "Trajectory")
      .def_readonly("t", &PyTrajectory::t)
      .def_readonly("mean_n", &PyTrajectory::mean_n)
      .def_readonly("mandel_q", &PyTrajectory::mandel_q)
      .def_readonly("q_valid", &PyTrajectory::q_valid)
      .def_readonly("p_e", &PyTrajectory::p_e)
      .def_readonly("leakage", &PyTrajectory::leakage)
      .def_readonly("fock_dist", &PyTrajectory::fock_dist)
      .def_readonly("status", &PyTrajectory::status)
      .def_readonly("sidecar", &PyTrajectory::sidecar);

  m.def("evolve_bare",
        [](const SystemParams& p, int fock_cutoff, const std::string& qubit, int n, double t_end, double dt,
           int sample_stride, const std::string& kernel) {
          const HilbertSpace space(fock_cutoff);
          const DensityMatrix rho0 = pure_state(basis_state(space, qubit == "e" ? Qubit::e : Qubit::g, n));
          const SweepProtocol flat{2.0, 0.0, 0.0, 1, t_end, 8.0};
          const TimeGrid grid{0.0, t_end, dt, sample_stride};
          py::gil_scoped_release release;
          return convert(evolve(rho0, p, flat, parse_kernel(kernel), grid));
        },
        py::arg("params"), py::arg("fock_cutoff"), py::arg("qubit"), py::arg("n"), py::arg("t_end"),
        py::arg("dt"), py::arg("sample_stride") = 1, py::arg("kernel") = "none",
        "Evolve a bare state |q, n> at constant modulation frequency 2.");

  m.def("resolve_config", [](const std::string& text) { return sidecar(resolve(config_from(text))).dump(); },
        py::arg("config_json"), "Resolved parameters of a scenario as a JSON string.");

  m.def("run_config",
        [](const std::string& text) {
          const ScenarioConfig c = config_from(text);
          RunResult run;
          {
            py::gil_scoped_release release;
            run = run_scenario(c);
          }
          PyTrajectory out = convert(run.trajectory);
          out.sidecar = run_sidecar(run).dump();
          return out;
        },
        py::arg("config_json"), "Run a scenario given as JSON text.");
}
