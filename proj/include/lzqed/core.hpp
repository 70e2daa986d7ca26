#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lzqed {

using cplx = std::complex<double>;

// Dense storage throughout. Operators and density matrices live on the
// truncated qubit x Fock space; see HilbertSpace for the basis order.
using Operator = Eigen::MatrixXcd;
using DensityMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested state does not fit inside the Fock truncation.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters fall outside the validity region of an approximate model.
class OutOfRegime : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LabelAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lzqed
