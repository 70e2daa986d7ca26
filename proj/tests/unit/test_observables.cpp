#include <doctest.h>

#include <cmath>
#include <random>

#include "lzqed/observables.hpp"
#include "oracles/oracles.hpp"

using namespace lzqed;

TEST_SUITE("observables") {
  TEST_CASE("mandel q of reference states") {
    const HilbertSpace space = build_space(24);
    const MandelQ coh = mandel_q(coherent_state(space, cplx(0.6, 0.8)), space);
    CHECK(coh.valid);
    CHECK(std::abs(coh.value) < 1e-6);

    const MandelQ fock = mandel_q(pure_state(basis_state(space, Qubit::g, 3)), space);
    CHECK(fock.valid);
    CHECK(fock.value == doctest::Approx(-1.0).epsilon(1e-14));

    const MandelQ vac = mandel_q(pure_state(basis_state(space, Qubit::g, 0)), space);
    CHECK_FALSE(vac.valid);
    CHECK(vac.value == 0.0);
  }

  TEST_CASE("mandel q of squeezed vacuum statistics") {
    for (double r : {0.3, 0.6, 0.9}) {
      const std::vector<double> p = oracle::squeezed_vacuum_distribution(r, 200);
      const Eigen::VectorXd dist = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
      const double mean = std::sinh(r) * std::sinh(r);
      const MandelQ q = mandel_q_from_distribution(dist);
      CHECK(q.valid);
      CHECK(q.value == doctest::Approx(1.0 + 2.0 * mean).epsilon(1e-3 / (1.0 + 2.0 * mean)));
      CHECK(q.value == doctest::Approx(oracle::mandel_q(p)).epsilon(1e-12));
    }
  }

  TEST_CASE("two-point mixture") {
    const HilbertSpace space = build_space(4);
    DensityMatrix rho = DensityMatrix::Zero(space.dim(), space.dim());
    rho(space.index(Qubit::g, 0), space.index(Qubit::g, 0)) = 0.5;
    rho(space.index(Qubit::g, 1), space.index(Qubit::g, 1)) = 0.5;
    const ObservableBundle b = bundle(rho, space);
    CHECK(b.mean_n == doctest::Approx(0.5));
    CHECK(b.mandel_q.value == doctest::Approx(-0.5));
    CHECK(b.p_excited == 0.0);
  }

  TEST_CASE("excited vacuum and resonant doublet") {
    const HilbertSpace space = build_space(6);
    const ObservableBundle e0 = bundle(pure_state(basis_state(space, Qubit::e, 0)), space);
    CHECK(e0.p_excited == 1.0);
    CHECK(e0.mean_n == 0.0);
    CHECK_FALSE(e0.mandel_q.valid);

    SystemParams p;
    const DressedSpectrum jc = jc_spectrum(p, space, 3);
    const ObservableBundle r2 = bundle(pure_state(jc.at(Label::plus(2)).vector), space, &jc);
    CHECK(r2.mean_n == doctest::Approx(1.5));
    CHECK(r2.p_excited == doctest::Approx(0.5));
    CHECK(r2.joint_g(2) == doctest::Approx(0.5));
    CHECK(r2.joint_e(1) == doctest::Approx(0.5));
    CHECK(r2.fock_dist.sum() == doctest::Approx(1.0));
    CHECK(r2.dressed_pops.size() == jc.size());
    for (const auto& [label, pop] : r2.dressed_pops) CHECK(pop == doctest::Approx(label == Label::plus(2) ? 1.0 : 0.0));
  }

  TEST_CASE("selected dressed populations") {
    const HilbertSpace space = build_space(6);
    const DressedSpectrum jc = jc_spectrum(SystemParams{}, space, 3);
    const DensityMatrix rho = pure_state(basis_state(space, Qubit::g, 1));
    const std::vector<Label> labels{Label::plus(1), Label::minus(1)};
    const ObservableBundle b = bundle(rho, space, &jc, labels);
    REQUIRE(b.dressed_pops.size() == 2);
    CHECK(b.dressed_pops[0].second == doctest::Approx(0.5));
    CHECK(b.dressed_pops[1].second == doctest::Approx(0.5));
    CHECK(dressed_population(rho, jc, Label::ground()) == doctest::Approx(0.0));
  }

  TEST_CASE("partial trace over the qubit") {
    std::mt19937_64 rng(2);
    const int n = 5;
    const HilbertSpace space = build_space(n);
    const DensityMatrix rho = oracle::random_density(space.dim(), rng);
    const Eigen::MatrixXcd field = reduced_field_state(rho, space);
    Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ref(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
    CHECK((field - ref).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(field.trace() - 1.0) < 1e-12);
  }
}
