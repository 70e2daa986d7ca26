#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "lzqed/core.hpp"
#include "lzqed/model.hpp"
#include "lzqed/qops.hpp"

namespace lzqed {

/// Dressed-state label: the ground state G, or (n, +/-) for the doublet of
/// n total excitations.
struct Label {
  int n = 0;
  int sign = 0;  // 0 for G, otherwise +1 or -1

  static Label ground() { return {0, 0}; }
  static Label plus(int n) { return {n, +1}; }
  static Label minus(int n) { return {n, -1}; }

  bool is_ground() const { return sign == 0; }
  std::string str() const;  // "G", "2+", "1-"
  static Label parse(const std::string& s);

  auto operator<=>(const Label&) const = default;
};

enum class SpectrumKind { BlochSiegert, JaynesCummings, Exact };

std::string to_string(SpectrumKind k);

struct Level {
  Label label;
  double energy = 0.0;
  StateVector vector;
  /// |e, N-1>: its doublet partner |g, N> is cut off by the truncation.
  bool truncation_edge = false;
};

struct DressedSpectrum {
  SpectrumKind kind = SpectrumKind::Exact;
  HilbertSpace space{2};
  std::vector<Level> levels;          // sorted by energy
  std::vector<double> mixing_angles;  // theta_n at index n-1 (BS/JC only)
  std::vector<std::string> warnings;

  std::size_t size() const { return levels.size(); }
  std::optional<std::size_t> find(const Label& label) const;
  const Level& at(const Label& label) const;  // throws InvalidArgument
  /// Columns are the level vectors in stored order.
  Eigen::MatrixXcd basis_matrix() const;
  Eigen::VectorXd energies() const;
  bool complete() const { return static_cast<int>(levels.size()) == space.dim(); }
};

/// Mixing angle of the n-excitation doublet for an effective detuning
/// `detuning` between |g,n> and |e,n-1>. Lies in [0, pi/2].
double mixing_angle(double detuning, double g0, int n);

/// Analytic Bloch-Siegert spectrum for levels G and (n, +/-) with n <= n_max.
/// Eigenvectors are U_R |Upsilon>, with U_R applied as a matrix exponential.
/// Throws OutOfRegime when Lambda >= 0.1 and InvalidArgument unless
/// 0 <= n_max < fock_cutoff - 2.
DressedSpectrum bloch_siegert_spectrum(const SystemParams& p, const HilbertSpace& space, int n_max);

/// Same with delta_plus = Lambda = xi = 0 (so U_R = 1).
DressedSpectrum jc_spectrum(const SystemParams& p, const HilbertSpace& space, int n_max);

/// Complete orthonormal bases (all 2N states, including the truncation edge
/// state) used by the dressed dissipators. No regime check.
DressedSpectrum bloch_siegert_basis(const SystemParams& p, const HilbertSpace& space);
DressedSpectrum jc_basis(const SystemParams& p, const HilbertSpace& space);

/// Full diagonalization of the bare Rabi Hamiltonian. Labels come from the
/// maximum overlap with the Bloch-Siegert basis; throws LabelAmbiguity when a
/// level overlaps its label by less than 0.5.
DressedSpectrum exact_spectrum(const SystemParams& p, const HilbertSpace& space);

struct Ambiguity {
  std::size_t target = 0;
  std::vector<std::size_t> candidates;  // reference indices
  std::vector<double> overlaps;
};

struct LabelMatch {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> reference_index;  // per target level
  std::vector<double> overlap;               // |<ref|target>|^2 of the chosen pair
  std::vector<Ambiguity> ambiguities;
};

/// Greedy maximum-overlap assignment of reference levels to target levels.
/// Ties go to the lower index. Targets whose two best overlaps differ by less
/// than 1e-3 are reported as ambiguous.
LabelMatch match_labels(const DressedSpectrum& reference, const DressedSpectrum& target);

/// Largest n for which the dispersive condition holds, floor((Delta_-/(4 g0))^2).
int dispersive_n_max(const SystemParams& p);

/// Center modulation frequency for the requested transition.
double resonance_eta(const SystemParams& p, const Regime& regime);

}  // namespace lzqed
