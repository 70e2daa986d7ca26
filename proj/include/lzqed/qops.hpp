#pragma once

#include "lzqed/core.hpp"

namespace lzqed {

enum class Qubit : int { g = 0, e = 1 };

/// Truncated qubit x Fock space with Fock levels 0..N-1.
///
/// Basis index of |q, n> is 2n + q with g = 0 and e = 1, so the two qubit
/// states of one photon number sit next to each other.
class HilbertSpace {
 public:
  explicit HilbertSpace(int fock_cutoff);

  int fock_cutoff() const { return fock_cutoff_; }
  int dim() const { return 2 * fock_cutoff_; }

  int index(Qubit q, int n) const { return 2 * n + static_cast<int>(q); }
  static int photons(int index) { return index / 2; }
  static Qubit qubit(int index) { return index % 2 == 0 ? Qubit::g : Qubit::e; }

  bool operator==(const HilbertSpace&) const = default;

 private:
  int fock_cutoff_;
};

HilbertSpace build_space(int fock_cutoff);

struct LadderOperators {
  Operator a, a_dag, n;
  Operator sp, sm, sz;
  Operator x_field;  // a + a^dag
  Operator x_qubit;  // sigma_+ + sigma_-
};

LadderOperators fock_and_qubit_operators(const HilbertSpace& space);

StateVector basis_state(const HilbertSpace& space, Qubit q, int n);
DensityMatrix pure_state(const StateVector& psi);

/// Coherent field amplitude alpha with the qubit in |g>. The Fock expansion
/// is renormalized after truncation. Throws TruncationError when
/// |alpha|^2 > N/2.
StateVector coherent_vector(const HilbertSpace& space, cplx alpha);
DensityMatrix coherent_state(const HilbertSpace& space, cplx alpha);

/// Total population of the two highest Fock levels (both qubit states).
double leakage(const DensityMatrix& rho, const HilbertSpace& space);

/// max |A - A^dag| entrywise.
double hermiticity_error(const Eigen::MatrixXcd& m);

}  // namespace lzqed
