#include <doctest.h>

#include <cmath>
#include <random>

#include "lzqed/dissipators.hpp"
#include "oracles/oracles.hpp"

using namespace lzqed;

namespace {

SystemParams rates(double delta_minus_in_g0 = 0.0) {
  SystemParams p;
  p.g0 = 0.04;
  p.Omega0 = 1.0 - delta_minus_in_g0 * 0.04;
  p.kappa = 3e-3;
  p.gamma = 5e-3;
  p.gamma_phi = 7e-3;
  return p;
}

std::size_t idx(const DressedSpectrum& s, const Label& l) { return *s.find(l); }

// Sum of explicit rank-one Lindblad terms built from the table.
DensityMatrix dressed_reference(const DensityMatrix& rho, const RateTable& t) {
  const Eigen::MatrixXcd w = t.basis.basis_matrix();
  const Eigen::Index d = w.cols();
  const Eigen::MatrixXd total = t.total();
  Operator dephase = Operator::Zero(d, d);
  for (Eigen::Index l = 0; l < d; ++l) dephase += t.phi(l) * w.col(l) * w.col(l).adjoint();
  DensityMatrix out = lindblad_term(dephase, rho);
  for (Eigen::Index l = 0; l < d; ++l)
    for (Eigen::Index k = 0; k < d; ++k)
      if (total(l, k) != 0.0) out += total(l, k) * lindblad_term(w.col(l) * w.col(k).adjoint(), rho);
  return out;
}

}  // namespace

TEST_SUITE("dissipators") {
  TEST_CASE("kernel names") {
    for (const char* k : {"none", "ph", "jc", "rabi"}) CHECK(to_string(parse_kernel(k)) == k);
    CHECK_THROWS_AS(parse_kernel("lindblad"), InvalidArgument);
  }

  TEST_CASE("lindblad term matches the superoperator oracle") {
    std::mt19937_64 rng(7);
    const Eigen::MatrixXcd rho = oracle::random_density(6, rng);
    const Eigen::MatrixXcd l = Eigen::MatrixXcd::Random(6, 6);
    const Eigen::VectorXcd ref = oracle::dissipator_super(l) * oracle::vec(rho);
    CHECK((lindblad_term(l, rho) - oracle::unvec(ref, 6)).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("rate table at resonance") {
    const SystemParams p = rates();
    const HilbertSpace space = build_space(6);
    const RateTable t = build_rate_table(jc_basis(p, space), p);
    const std::size_t g = idx(t.basis, Label::ground()), m1 = idx(t.basis, Label::minus(1));
    CHECK(t.gamma_kappa(g, m1) == doctest::Approx(p.kappa / 2.0));
    CHECK(t.gamma_gamma(g, m1) == doctest::Approx(p.gamma / 2.0));
    CHECK(t.gamma_kappa(m1, g) == 0.0);
    CHECK(t.phi(g) == doctest::Approx(-std::sqrt(p.gamma_phi / 2.0)));
    CHECK((t.total().diagonal().array() == 0.0).all());

    SystemParams quiet = p;
    quiet.kappa = quiet.gamma = quiet.gamma_phi = 0.0;
    const RateTable z = build_rate_table(jc_basis(quiet, space), quiet);
    CHECK(z.total().cwiseAbs().maxCoeff() == 0.0);
    CHECK(z.phi.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("only downward rates") {
    const SystemParams p = rates(9.0);
    const RateTable t = build_rate_table(bloch_siegert_basis(p, build_space(7)), p);
    const Eigen::VectorXd e = t.basis.energies();
    const Eigen::MatrixXd total = t.total();
    for (Eigen::Index l = 0; l < total.rows(); ++l)
      for (Eigen::Index k = 0; k < total.cols(); ++k)
        if (e(k) < e(l)) CHECK(total(l, k) == 0.0);
  }

  TEST_CASE("degenerate gaps are reported") {
    SystemParams p = rates();
    p.g0 = 0.0;
    CHECK_FALSE(build_rate_table(jc_basis(p, build_space(5)), p).warnings.empty());
  }

  TEST_CASE("jc and rabi tables agree") {
    const SystemParams p = rates();
    const HilbertSpace space = build_space(8);
    const RateTable jc = build_rate_table(jc_basis(p, space), p);
    const RateTable bs = build_rate_table(bloch_siegert_basis(p, space), p);
    const Eigen::MatrixXd a = jc.total(), b = bs.total();
    // Compare by label, away from the truncation edge, relative to the largest rate.
    const double scale = a.maxCoeff();
    const int edge = space.fock_cutoff() - 1;
    double worst = 0.0;
    for (std::size_t l = 0; l < jc.basis.size(); ++l) {
      for (std::size_t k = 0; k < jc.basis.size(); ++k) {
        const Label& ll = jc.basis.levels[l].label;
        const Label& lk = jc.basis.levels[k].label;
        if (ll.n >= edge || lk.n >= edge) continue;
        const double x = a(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k));
        const double y = b(static_cast<Eigen::Index>(idx(bs.basis, ll)), static_cast<Eigen::Index>(idx(bs.basis, lk)));
        worst = std::max(worst, std::abs(x - y) / scale);
      }
    }
    CHECK(worst < 0.1);
  }

  TEST_CASE("dressed kernel is trace-free, hermitian and matches explicit jumps") {
    std::mt19937_64 rng(11);
    for (double dm : {0.0, 9.0}) {
      const SystemParams p = rates(dm);
      const HilbertSpace space = build_space(6);
      for (const RateTable& t : {build_rate_table(jc_basis(p, space), p), build_rate_table(bloch_siegert_basis(p, space), p)}) {
        for (int trial = 0; trial < 5; ++trial) {
          const DensityMatrix rho = oracle::random_density(space.dim(), rng);
          const DensityMatrix out = apply_dressed(rho, t);
          CHECK(std::abs(out.trace()) < 1e-12);
          CHECK(hermiticity_error(out) < 1e-12);
          CHECK((out - dressed_reference(rho, t)).cwiseAbs().maxCoeff() < 1e-12);
        }
        const StateVector g = t.basis.at(Label::ground()).vector;
        CHECK(apply_dressed(pure_state(g), t).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }

  TEST_CASE("dressed generator in its own basis") {
    std::mt19937_64 rng(5);
    const SystemParams p = rates(10.0);
    const RateTable t = build_rate_table(bloch_siegert_basis(p, build_space(5)), p);
    const Eigen::MatrixXcd w = t.basis.basis_matrix();
    const DensityMatrix rho = oracle::random_density(10, rng);
    Eigen::MatrixXcd out;
    DressedGenerator(t).apply(w.adjoint() * rho * w, out);
    CHECK((w * out * w.adjoint() - apply_dressed(rho, t)).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("decay out of the first doublet") {
    const SystemParams p = rates();
    const HilbertSpace space = build_space(6);
    const RateTable t = build_rate_table(jc_basis(p, space), p);
    const StateVector m1 = t.basis.at(Label::minus(1)).vector;
    const StateVector g = t.basis.at(Label::ground()).vector;
    const DensityMatrix d = apply_dressed(pure_state(m1), t);
    const double rate = (g.adjoint() * d * g)(0, 0).real();
    CHECK(rate == doctest::Approx(p.kappa / 2.0 + p.gamma / 2.0).epsilon(1e-12));
  }

  TEST_CASE("phenomenological kernel") {
    const SystemParams p = rates(10.0);
    const HilbertSpace space = build_space(5);
    const oracle::Ops o = oracle::ops(5);

    const DensityMatrix g0 = pure_state(basis_state(space, Qubit::g, 0));
    CHECK(apply_phenomenological(g0, p, space).cwiseAbs().maxCoeff() == 0.0);

    const DensityMatrix g1 = pure_state(basis_state(space, Qubit::g, 1));
    CHECK((o.n * apply_phenomenological(g1, p, space)).trace().real() == doctest::Approx(-p.kappa));

    const DensityMatrix e0 = pure_state(basis_state(space, Qubit::e, 0));
    const Operator pe = (o.sz + o.id) / 2.0;
    CHECK((pe * apply_phenomenological(e0, p, space)).trace().real() == doctest::Approx(-p.gamma));

    std::mt19937_64 rng(3);
    const DensityMatrix rho = oracle::random_density(10, rng);
    const Eigen::MatrixXcd super = p.kappa * oracle::dissipator_super(o.a) + p.gamma * oracle::dissipator_super(o.sm) +
                                   0.5 * p.gamma_phi * oracle::dissipator_super(o.sz);
    const Eigen::MatrixXcd ref = oracle::unvec(super * oracle::vec(rho), 10);
    const DensityMatrix out = apply_phenomenological(rho, p, space);
    CHECK((out - ref).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(out.trace()) < 1e-14);

    Eigen::MatrixXcd fast;
    PhenomenologicalGenerator(p, space).apply(rho, fast);
    CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-14);
  }
}
