#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lzqed/core.hpp"
#include "lzqed/model.hpp"
#include "lzqed/spectrum.hpp"

namespace lzqed {

enum class KernelKind { None, Phenomenological, JcDressed, RabiDressed };

std::string to_string(KernelKind k);     // none | ph | jc | rabi
KernelKind parse_kernel(const std::string& s);

/// Zero-temperature transition rates between the levels of a dressed basis.
/// Indices follow the level order of `basis` (ascending energy). Entry [l][k]
/// is the rate of the jump |l><k|; it vanishes unless level k lies above l.
struct RateTable {
  DressedSpectrum basis;
  Eigen::VectorXd phi;          // sqrt(gamma_phi/2) <l|sz|l>
  Eigen::MatrixXd gamma_phi;    // gamma_phi |<l|sz|k>|^2 / 2
  Eigen::MatrixXd gamma_kappa;  // kappa |<l|a + a^dag|k>|^2
  Eigen::MatrixXd gamma_gamma;  // gamma |<l|s+ + s-|k>|^2
  std::vector<std::string> warnings;

  Eigen::MatrixXd total() const { return gamma_phi + gamma_kappa + gamma_gamma; }
};

/// The basis must be complete. Equal transition frequencies (within 1e-8)
/// are reported in `warnings` and otherwise treated independently.
RateTable build_rate_table(const DressedSpectrum& basis, const SystemParams& p);

/// D[O] rho = O rho O^dag - (O^dag O rho + rho O^dag O)/2.
DensityMatrix lindblad_term(const Operator& jump, const DensityMatrix& rho);

/// Dressed-picture Lindbladian applied to rho given in the Fock basis.
DensityMatrix apply_dressed(const DensityMatrix& rho, const RateTable& table);

/// kappa D[a] + gamma D[s-] + (gamma_phi/2) D[sz].
DensityMatrix apply_phenomenological(const DensityMatrix& rho, const SystemParams& p,
                                     const HilbertSpace& space);

/// Dressed Lindbladian acting on matrices already expressed in the table's
/// eigenbasis. Every jump |l><k| is rank one there, so an application costs
/// O(dim^2).
class DressedGenerator {
 public:
  explicit DressedGenerator(const RateTable& table);
  /// out = L(rho) in the dressed basis.
  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;

 private:
  Eigen::MatrixXcd decay_;  // coefficient multiplying rho_ij
  std::vector<std::vector<std::pair<int, double>>> feed_;  // l <- (k, rate)
};

/// Phenomenological Lindbladian in the Fock basis, closed form.
class PhenomenologicalGenerator {
 public:
  PhenomenologicalGenerator(const SystemParams& p, const HilbertSpace& space);
  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;

 private:
  int dim_;
  double kappa_, gamma_;
  Eigen::MatrixXcd decay_;
  Eigen::MatrixXcd photon_feed_;  // kappa sqrt((n_i+1)(n_j+1))
};

}  // namespace lzqed
