#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qaa {

using complex = std::complex<double>;

/// One of the three Pauli operators.
enum class PauliAxis { X, Y, Z };

/// A classical spin configuration, encoded as an integer over the
/// computational (sigma_z) basis.
///
/// Bit k of `bits` belongs to lattice site k. Bit value 0 means
/// sigma_z = +1 at that site, bit value 1 means sigma_z = -1. The map
/// between indices and spin configurations is a bijection; every module
/// in this library shares this convention.
struct BasisConfig {
  std::uint64_t bits = 0;

  /// sigma_z eigenvalue (+1 or -1) at `site`.
  int spin_z(int site) const { return (bits >> site) & 1u ? -1 : +1; }

  friend bool operator==(const BasisConfig&, const BasisConfig&) = default;
  friend auto operator<=>(const BasisConfig&, const BasisConfig&) = default;
};

/// Chain topology for the problem Hamiltonian.
enum class Boundary { Ring, OpenChain };

/// Raised when user-supplied configuration (CLI flags, JSON config files)
/// fails validation. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when time integration cannot meet its accuracy contract
/// (norm drift beyond tolerance, or step-size underflow at a steering
/// spike). CLI exit code 3.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double tau)
      : std::runtime_error(what), tau_(tau) {}
  /// Dimensionless schedule position at which integration failed.
  double tau() const { return tau_; }

 private:
  double tau_ = 0.0;
};

/// Raised by the steering construction for a vanishing effective field,
/// where the cross-product formula is undefined.
class SingularFieldError : public std::runtime_error {
 public:
  explicit SingularFieldError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised when the instantaneous ground state needed by the
/// counterdiabatic construction is degenerate (gap below tolerance).
class DegenerateGapError : public std::runtime_error {
 public:
  DegenerateGapError(const std::string& what, double tau)
      : std::runtime_error(what), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_ = 0.0;
};

}  // namespace qaa
