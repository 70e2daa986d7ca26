#include "lzqed/qops.hpp"

#include <cmath>
#include <string>

namespace lzqed {

HilbertSpace::HilbertSpace(int fock_cutoff) : fock_cutoff_(fock_cutoff) {
  if (fock_cutoff < 2) {
    throw InvalidArgument("fock cutoff must be >= 2, got " + std::to_string(fock_cutoff));
  }
}

HilbertSpace build_space(int fock_cutoff) { return HilbertSpace(fock_cutoff); }

LadderOperators fock_and_qubit_operators(const HilbertSpace& space) {
  const int d = space.dim();
  const int nf = space.fock_cutoff();
  LadderOperators ops;
  ops.a = Operator::Zero(d, d);
  ops.sm = Operator::Zero(d, d);
  ops.sz = Operator::Zero(d, d);
  for (int n = 0; n < nf; ++n) {
    for (Qubit q : {Qubit::g, Qubit::e}) {
      const int i = space.index(q, n);
      if (n > 0) ops.a(space.index(q, n - 1), i) = std::sqrt(static_cast<double>(n));
      ops.sz(i, i) = q == Qubit::e ? 1.0 : -1.0;
    }
    ops.sm(space.index(Qubit::g, n), space.index(Qubit::e, n)) = 1.0;
  }
  ops.a_dag = ops.a.adjoint();
  ops.sp = ops.sm.adjoint();
  ops.n = ops.a_dag * ops.a;
  ops.x_field = ops.a + ops.a_dag;
  ops.x_qubit = ops.sp + ops.sm;
  return ops;
}

StateVector basis_state(const HilbertSpace& space, Qubit q, int n) {
  if (n < 0 || n >= space.fock_cutoff()) {
    throw InvalidArgument("photon number " + std::to_string(n) + " outside truncation");
  }
  StateVector psi = StateVector::Zero(space.dim());
  psi(space.index(q, n)) = 1.0;
  return psi;
}

DensityMatrix pure_state(const StateVector& psi) { return psi * psi.adjoint(); }

StateVector coherent_vector(const HilbertSpace& space, cplx alpha) {
  const double mean = std::norm(alpha);
  if (mean > 0.5 * space.fock_cutoff()) {
    throw TruncationError("coherent amplitude |alpha|^2 = " + std::to_string(mean) +
                          " too large for fock cutoff " + std::to_string(space.fock_cutoff()));
  }
  StateVector psi = StateVector::Zero(space.dim());
  // Build alpha^n / sqrt(n!) recursively to avoid factorial overflow.
  cplx c = 1.0;
  for (int n = 0; n < space.fock_cutoff(); ++n) {
    if (n > 0) c *= alpha / std::sqrt(static_cast<double>(n));
    psi(space.index(Qubit::g, n)) = c;
  }
  psi.normalize();
  return psi;
}

DensityMatrix coherent_state(const HilbertSpace& space, cplx alpha) {
  return pure_state(coherent_vector(space, alpha));
}

double leakage(const DensityMatrix& rho, const HilbertSpace& space) {
  double p = 0.0;
  const int nf = space.fock_cutoff();
  for (int n = nf - 2; n < nf; ++n) {
    p += rho(space.index(Qubit::g, n), space.index(Qubit::g, n)).real();
    p += rho(space.index(Qubit::e, n), space.index(Qubit::e, n)).real();
  }
  return p;
}

double hermiticity_error(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace lzqed
