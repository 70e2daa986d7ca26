#include "lzqed/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace lzqed {

std::string Label::str() const {
  if (is_ground()) return "G";
  return std::to_string(n) + (sign > 0 ? "+" : "-");
}

Label Label::parse(const std::string& s) {
  if (s == "G" || s == "0") return ground();
  if (s.size() >= 2 && (s.back() == '+' || s.back() == '-')) {
    const std::string digits = s.substr(0, s.size() - 1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      const int n = std::stoi(digits);
      if (n >= 1) return {n, s.back() == '+' ? 1 : -1};
    }
  }
  throw InvalidArgument("bad dressed-state label '" + s + "'");
}

std::string to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::BlochSiegert: return "bloch_siegert";
    case SpectrumKind::JaynesCummings: return "jaynes_cummings";
    case SpectrumKind::Exact: return "exact";
  }
  return "unknown";
}

std::optional<std::size_t> DressedSpectrum::find(const Label& label) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].label == label) return i;
  }
  return std::nullopt;
}

const Level& DressedSpectrum::at(const Label& label) const {
  const auto i = find(label);
  if (!i) throw InvalidArgument("no dressed level " + label.str() + " in spectrum");
  return levels[*i];
}

Eigen::MatrixXcd DressedSpectrum::basis_matrix() const {
  Eigen::MatrixXcd m(space.dim(), static_cast<Eigen::Index>(levels.size()));
  for (std::size_t i = 0; i < levels.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = levels[i].vector;
  return m;
}

Eigen::VectorXd DressedSpectrum::energies() const {
  Eigen::VectorXd e(static_cast<Eigen::Index>(levels.size()));
  for (std::size_t i = 0; i < levels.size(); ++i) e(static_cast<Eigen::Index>(i)) = levels[i].energy;
  return e;
}

double mixing_angle(double detuning, double g0, int n) {
  const double coupling = 2.0 * g0 * std::sqrt(static_cast<double>(n));
  const double root = std::hypot(detuning, coupling);
  if (coupling == 0.0) {
    if (std::abs(detuning) < 1e-12) return 0.25 * M_PI;
    return detuning > 0.0 ? 0.5 * M_PI : 0.0;
  }
  // detuning + root loses precision when detuning << 0.
  const double num = detuning >= 0.0 ? detuning + root : coupling * coupling / (root - detuning);
  return std::atan2(num, coupling);
}

namespace {

// Generator of U_R = exp[Lambda (a s- - a^dag s+) + xi (a^2 - a^dag^2) sz].
Eigen::MatrixXd rotation_generator(const DerivedParams& d, const HilbertSpace& space) {
  const auto ops = fock_and_qubit_operators(space);
  const Eigen::MatrixXd a = ops.a.real();
  const Eigen::MatrixXd sm = ops.sm.real();
  const Eigen::MatrixXd sz = ops.sz.real();
  const Eigen::MatrixXd asm_ = a * sm;
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd gen = d.Lambda * (asm_ - asm_.transpose());
  gen += d.xi * (a2 - a2.transpose()) * sz;
  return gen;
}

struct Analytic {
  double shift = 0.0;     // delta_plus, zero for JC
  bool rotate = false;    // apply U_R
  SpectrumKind kind = SpectrumKind::BlochSiegert;
};

// All 2N analytic levels, sorted by energy. Levels above n_max are dropped
// afterwards when n_max >= 0.
DressedSpectrum analytic_spectrum(const SystemParams& p, const HilbertSpace& space,
                                  const Analytic& how, int n_max) {
  const DerivedParams d = derive(p);
  const double dp = how.shift;
  const int nf = space.fock_cutoff();
  DressedSpectrum s;
  s.kind = how.kind;
  s.space = space;

  std::vector<Level> raw;
  raw.push_back({Label::ground(), -(p.Omega0 + dp) / 2.0, basis_state(space, Qubit::g, 0), false});
  for (int n = 1; n < nf; ++n) {
    const double det = d.Delta_minus - 2.0 * dp * n;
    const double theta = mixing_angle(det, p.g0, n);
    s.mixing_angles.push_back(theta);
    const double root = std::hypot(det, 2.0 * p.g0 * std::sqrt(static_cast<double>(n)));
    const double mid = p.omega0 * n - (p.omega0 + dp) / 2.0;
    const StateVector gn = basis_state(space, Qubit::g, n);
    const StateVector en = basis_state(space, Qubit::e, n - 1);
    const double sn = std::sin(theta), cs = std::cos(theta);
    raw.push_back({Label::plus(n), mid + 0.5 * root, sn * gn + cs * en, false});
    raw.push_back({Label::minus(n), mid - 0.5 * root, cs * gn - sn * en, false});
  }
  {
    // |e, N-1>: BS Hamiltonian diagonal element, partner |g, N> truncated.
    const int n = nf;
    const double det = d.Delta_minus - 2.0 * dp * n;
    const double energy = (p.omega0 + dp) * (n - 1) + (p.Omega0 + dp) / 2.0;
    const Label label = det < 0.0 ? Label::plus(n) : Label::minus(n);
    raw.push_back({label, energy, basis_state(space, Qubit::e, nf - 1), true});
  }

  if (how.rotate) {
    const Eigen::MatrixXd gen = rotation_generator(d, space);
    const Eigen::MatrixXcd u = gen.exp().cast<cplx>();
    for (auto& lv : raw) lv.vector = u * lv.vector;
  }

  if (n_max >= 0) {
    std::erase_if(raw, [n_max](const Level& lv) { return lv.label.n > n_max; });
    s.mixing_angles.resize(static_cast<std::size_t>(n_max));
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](const Level& a, const Level& b) { return a.energy < b.energy; });
  s.levels = std::move(raw);
  return s;
}

void check_n_max(const HilbertSpace& space, int n_max) {
  if (n_max < 0 || n_max >= space.fock_cutoff() - 2) {
    throw InvalidArgument("n_max = " + std::to_string(n_max) + " must satisfy 0 <= n_max < " +
                          std::to_string(space.fock_cutoff() - 2));
  }
}

}  // namespace

DressedSpectrum bloch_siegert_spectrum(const SystemParams& p, const HilbertSpace& space, int n_max) {
  const DerivedParams d = derive(p);
  if (d.Lambda >= 0.1) {
    throw OutOfRegime("Bloch-Siegert expansion needs Lambda = g0/Delta_+ < 0.1, got " +
                      std::to_string(d.Lambda));
  }
  check_n_max(space, n_max);
  return analytic_spectrum(p, space, {d.delta_plus, true, SpectrumKind::BlochSiegert}, n_max);
}

DressedSpectrum jc_spectrum(const SystemParams& p, const HilbertSpace& space, int n_max) {
  check_n_max(space, n_max);
  return analytic_spectrum(p, space, {0.0, false, SpectrumKind::JaynesCummings}, n_max);
}

DressedSpectrum bloch_siegert_basis(const SystemParams& p, const HilbertSpace& space) {
  return analytic_spectrum(p, space, {derive(p).delta_plus, true, SpectrumKind::BlochSiegert}, -1);
}

DressedSpectrum jc_basis(const SystemParams& p, const HilbertSpace& space) {
  return analytic_spectrum(p, space, {0.0, false, SpectrumKind::JaynesCummings}, -1);
}

LabelMatch match_labels(const DressedSpectrum& reference, const DressedSpectrum& target) {
  if (!(reference.space == target.space)) {
    throw InvalidArgument("match_labels: spectra live on different spaces");
  }
  const std::size_t nr = reference.size(), nt = target.size();
  Eigen::MatrixXd ov(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nr));
  const Eigen::MatrixXcd rb = reference.basis_matrix();
  const Eigen::MatrixXcd tb = target.basis_matrix();
  ov = (tb.adjoint() * rb).cwiseAbs2();

  struct Pair {
    double o;
    std::size_t t, r;
  };
  std::vector<Pair> pairs;
  pairs.reserve(nt * nr);
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t r = 0; r < nr; ++r)
      pairs.push_back({ov(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(r)), t, r});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.o > b.o; });

  LabelMatch m;
  m.reference_index.assign(nt, LabelMatch::npos);
  m.overlap.assign(nt, 0.0);
  std::vector<bool> used(nr, false);
  std::size_t assigned = 0;
  for (const auto& pr : pairs) {
    if (assigned == std::min(nt, nr)) break;
    if (m.reference_index[pr.t] != LabelMatch::npos || used[pr.r]) continue;
    m.reference_index[pr.t] = pr.r;
    m.overlap[pr.t] = pr.o;
    used[pr.r] = true;
    ++assigned;
  }

  for (std::size_t t = 0; t < nt; ++t) {
    std::vector<std::size_t> idx(nr);
    std::iota(idx.begin(), idx.end(), 0);
    const auto row = ov.row(static_cast<Eigen::Index>(t));
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return row(static_cast<Eigen::Index>(a)) > row(static_cast<Eigen::Index>(b));
    });
    if (nr < 2) continue;
    const double best = row(static_cast<Eigen::Index>(idx[0]));
    const double second = row(static_cast<Eigen::Index>(idx[1]));
    if (best > 1e-2 && best - second < 1e-3) {
      m.ambiguities.push_back({t, {idx[0], idx[1]}, {best, second}});
    }
  }
  return m;
}

DressedSpectrum exact_spectrum(const SystemParams& p, const HilbertSpace& space) {
  const Eigen::MatrixXd h = bare_hamiltonian(p, space).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("exact_spectrum: eigensolver failed");

  const DressedSpectrum ref = bloch_siegert_basis(p, space);
  const Eigen::MatrixXcd rb = ref.basis_matrix();
  const Eigen::VectorXd& evals = es.eigenvalues();
  Eigen::MatrixXcd vecs = es.eigenvectors().cast<cplx>();

  DressedSpectrum s;
  s.kind = SpectrumKind::Exact;
  s.space = space;

  // Inside a (near-)degenerate cluster the eigenvectors are arbitrary; rotate
  // them onto the reference vectors that project most strongly into it.
  const int d = space.dim();
  for (int start = 0; start < d;) {
    int end = start + 1;
    while (end < d && evals(end) - evals(end - 1) < 1e-8) ++end;
    const int k = end - start;
    if (k > 1) {
      std::ostringstream w;
      w << "near-degenerate exact eigenvalues at E = " << evals(start) << " (" << k
        << " levels); labels assigned from overlap only";
      s.warnings.push_back(w.str());
      const Eigen::MatrixXcd v = vecs.middleCols(start, k);
      const Eigen::MatrixXcd proj = v.adjoint() * rb;  // k x d
      std::vector<int> order(static_cast<std::size_t>(d));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return proj.col(a).squaredNorm() > proj.col(b).squaredNorm();
      });
      Eigen::MatrixXcd mcoef(k, k);
      for (int j = 0; j < k; ++j) mcoef.col(j) = proj.col(order[static_cast<std::size_t>(j)]);
      // Loewdin orthonormalization of V * M.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram(mcoef.adjoint() * mcoef);
      if (gram.eigenvalues().minCoeff() > 1e-12) {
        const Eigen::MatrixXcd inv_sqrt = gram.eigenvectors() *
                                          gram.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                          gram.eigenvectors().adjoint();
        vecs.middleCols(start, k) = v * mcoef * inv_sqrt;
      }
    }
    start = end;
  }

  for (int i = 0; i < d; ++i) s.levels.push_back({Label::ground(), evals(i), vecs.col(i), false});

  const LabelMatch match = match_labels(ref, s);
  for (int i = 0; i < d; ++i) {
    const auto r = match.reference_index[static_cast<std::size_t>(i)];
    const double o = match.overlap[static_cast<std::size_t>(i)];
    if (r == LabelMatch::npos || o < 0.5) {
      std::ostringstream err;
      err << "exact level " << i << " (E = " << evals(i) << ") has no Bloch-Siegert partner with overlap >= 0.5";
      if (r != LabelMatch::npos) err << " (best " << ref.levels[r].label.str() << ", overlap " << o << ")";
      throw LabelAmbiguity(err.str());
    }
    s.levels[static_cast<std::size_t>(i)].label = ref.levels[r].label;
    s.levels[static_cast<std::size_t>(i)].truncation_edge = ref.levels[r].truncation_edge;
  }
  return s;
}

int dispersive_n_max(const SystemParams& p) {
  const DerivedParams d = derive(p);
  if (d.resonant()) return 0;
  if (p.g0 == 0.0) return std::numeric_limits<int>::max();
  const double r = d.Delta_minus / (4.0 * p.g0);
  return static_cast<int>(std::floor(r * r));
}

double resonance_eta(const SystemParams& p, const Regime& regime) {
  const DerivedParams d = derive(p);
  const bool resonant_kind =
      regime.kind == RegimeKind::ResonantPlus || regime.kind == RegimeKind::ResonantMinus;
  if (resonant_kind) {
    if (!d.resonant()) {
      throw OutOfRegime("resonant regime requires |Delta_-| < 1e-6, got " + std::to_string(d.Delta_minus));
    }
    const double split = p.g0 * std::sqrt(2.0);
    return 2.0 * p.omega0 + (regime.kind == RegimeKind::ResonantPlus ? split : -split);
  }
  if (d.resonant()) {
    throw OutOfRegime("dispersive regime " + to_string(regime) + " requested at Delta_- = 0");
  }
  const int needed = regime.kind == RegimeKind::Sideband ? regime.m : 2;
  const int n_max = dispersive_n_max(p);
  if (needed > n_max) {
    std::ostringstream err;
    err << "dispersive condition g0 sqrt(n) << |Delta_-|/2 fails for n = " << needed
        << " (n_max = " << n_max << ")";
    throw OutOfRegime(err.str());
  }
  const double dm = *d.delta_minus, al = *d.alpha_kerr, dp = d.delta_plus;
  switch (regime.kind) {
    case RegimeKind::AntiJc:
      return d.Delta_plus - 2.0 * (dm - dp) + 4.0 * al;
    case RegimeKind::Dce:
      return 2.0 * p.omega0 + 2.0 * (dm - dp) - 4.0 * al;
    case RegimeKind::Sideband: {
      const double m = regime.m;
      return std::abs(d.Delta_minus - 2.0 * dp * m) + 2.0 * std::abs(dm) * m - 2.0 * std::abs(al) * m * m;
    }
    default:
      break;
  }
  throw InvalidArgument("unhandled regime");
}

}  // namespace lzqed
