#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qaa/types.hpp"

namespace qaa {

/// Complex amplitude vector over the 2^L computational basis.
///
/// Index i holds the amplitude of BasisConfig{i} (bit k = site k,
/// bit 0 => sigma_z = +1). States built through the checked constructors
/// are normalized to 1 within 1e-9; linear-operator applications and
/// integrator work vectors are unchecked by design, and norm drift is
/// monitored (never silently repaired) by the integrator.
class StateVector {
 public:
  StateVector(int n_spins, std::vector<complex> amplitudes);

  /// Basis state |config>.
  static StateVector basis_state(int n_spins, BasisConfig config);

  /// Checked: throws std::invalid_argument unless the length is 2^L and
  /// the norm is 1 within 1e-9.
  static StateVector from_amplitudes(int n_spins, std::vector<complex> amplitudes);

  int n_spins() const { return n_spins_; }
  std::size_t dim() const { return amp_.size(); }

  std::span<const complex> amplitudes() const { return amp_; }
  std::span<complex> amplitudes() { return amp_; }
  const complex& operator[](std::size_t i) const { return amp_[i]; }
  complex& operator[](std::size_t i) { return amp_[i]; }

  /// Sum of |amplitude|^2 (compensated summation).
  double norm_squared() const;

 private:
  int n_spins_;
  std::vector<complex> amp_;
};

/// sigma_axis^(site) |in>, computed by bit manipulation; no matrix is
/// materialized. Throws std::out_of_range for a site outside [0, L).
StateVector apply_pauli(PauliAxis axis, int site, const StateVector& in);

/// <a|b> with conjugation on `a`. Throws std::invalid_argument on a
/// length mismatch.
complex inner_product(const StateVector& a, const StateVector& b);

/// |amplitude[config]|^2. Throws std::out_of_range for an index outside
/// the state's basis.
double probability_of_configuration(const StateVector& state, BasisConfig config);

namespace kernel {

// Raw accumulation kernels shared by the Hamiltonian assembly. All of
// them add into `out`; none allocates. Spans must alias nothing.

/// out += scale * sum_k sigma_x^(k) in   (one pass per site)
void add_sigma_x_sum(int n_spins, double scale, std::span<const complex> in,
                     std::span<complex> out);

/// out += scale * diag .* in
void add_diagonal(std::span<const double> diag, double scale,
                  std::span<const complex> in, std::span<complex> out);

/// out += (scale * diag + shift) .* in   (fused form for gauge-shifted runs)
void add_diagonal_shifted(std::span<const double> diag, double scale,
                          double shift, std::span<const complex> in,
                          std::span<complex> out);

/// out += coeff[k] * sigma_y^(k) in, summed over sites.
void add_sigma_y_weighted(int n_spins, std::span<const double> coeff,
                          std::span<const complex> in, std::span<complex> out);

}  // namespace kernel

}  // namespace qaa
