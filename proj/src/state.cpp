#include "qaa/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qaa {

namespace {

void check_n_spins(int n_spins) {
  if (n_spins < 1 || n_spins > 30) {
    throw std::invalid_argument("n_spins must be in [1, 30], got " +
                                std::to_string(n_spins));
  }
}

}  // namespace

StateVector::StateVector(int n_spins, std::vector<complex> amplitudes)
    : n_spins_(n_spins), amp_(std::move(amplitudes)) {
  check_n_spins(n_spins);
  if (amp_.size() != (std::size_t{1} << n_spins_)) {
    throw std::invalid_argument("amplitude length " + std::to_string(amp_.size()) +
                                " is not 2^" + std::to_string(n_spins_));
  }
}

StateVector StateVector::basis_state(int n_spins, BasisConfig config) {
  check_n_spins(n_spins);
  const std::size_t dim = std::size_t{1} << n_spins;
  if (config.bits >= dim) {
    throw std::out_of_range("basis configuration out of range");
  }
  std::vector<complex> amp(dim, complex{0.0, 0.0});
  amp[config.bits] = complex{1.0, 0.0};
  return StateVector(n_spins, std::move(amp));
}

StateVector StateVector::from_amplitudes(int n_spins, std::vector<complex> amplitudes) {
  StateVector state(n_spins, std::move(amplitudes));
  if (std::abs(state.norm_squared() - 1.0) > 1e-9) {
    throw std::invalid_argument("state vector is not normalized within 1e-9");
  }
  return state;
}

double StateVector::norm_squared() const {
  double sum = 0.0, comp = 0.0;
  for (const complex& a : amp_) {
    const double term = a.real() * a.real() + a.imag() * a.imag();
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

StateVector apply_pauli(PauliAxis axis, int site, const StateVector& in) {
  if (site < 0 || site >= in.n_spins()) {
    throw std::out_of_range("pauli site " + std::to_string(site) +
                            " out of range for L=" + std::to_string(in.n_spins()));
  }
  const std::size_t dim = in.dim();
  const std::size_t mask = std::size_t{1} << site;
  std::vector<complex> out(dim);
  const auto a = in.amplitudes();
  switch (axis) {
    case PauliAxis::X:
      for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; ++i) {
          out[i] = a[i + mask];
          out[i + mask] = a[i];
        }
      }
      break;
    case PauliAxis::Y:
      // sigma_y |up> = i |down>, sigma_y |down> = -i |up>, with |up> the
      // sigma_z = +1 state (bit 0).
      for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; ++i) {
          const complex lo = a[i], hi = a[i + mask];
          out[i] = complex(hi.imag(), -hi.real());       // -i * hi
          out[i + mask] = complex(-lo.imag(), lo.real());  // +i * lo
        }
      }
      break;
    case PauliAxis::Z:
      for (std::size_t i = 0; i < dim; ++i) {
        out[i] = (i & mask) ? -a[i] : a[i];
      }
      break;
  }
  return StateVector(in.n_spins(), std::move(out));
}

complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  const auto av = a.amplitudes();
  const auto bv = b.amplitudes();
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    re += av[i].real() * bv[i].real() + av[i].imag() * bv[i].imag();
    im += av[i].real() * bv[i].imag() - av[i].imag() * bv[i].real();
  }
  return complex(re, im);
}

double probability_of_configuration(const StateVector& state, BasisConfig config) {
  if (config.bits >= state.dim()) {
    throw std::out_of_range("configuration index out of range");
  }
  const complex a = state[config.bits];
  return a.real() * a.real() + a.imag() * a.imag();
}

namespace kernel {

void add_sigma_x_sum(int n_spins, double scale, std::span<const complex> in,
                     std::span<complex> out) {
  const std::size_t dim = in.size();
  for (int k = 0; k < n_spins; ++k) {
    const std::size_t mask = std::size_t{1} << k;
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
      for (std::size_t i = base; i < base + mask; ++i) {
        out[i] += scale * in[i + mask];
        out[i + mask] += scale * in[i];
      }
    }
  }
}

void add_diagonal(std::span<const double> diag, double scale,
                  std::span<const complex> in, std::span<complex> out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] += (scale * diag[i]) * in[i];
  }
}

void add_diagonal_shifted(std::span<const double> diag, double scale,
                          double shift, std::span<const complex> in,
                          std::span<complex> out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] += (scale * diag[i] + shift) * in[i];
  }
}

void add_sigma_y_weighted(int n_spins, std::span<const double> coeff,
                          std::span<const complex> in, std::span<complex> out) {
  const std::size_t dim = in.size();
  for (int k = 0; k < n_spins; ++k) {
    const double c = coeff[k];
    if (c == 0.0) continue;
    const std::size_t mask = std::size_t{1} << k;
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
      for (std::size_t i = base; i < base + mask; ++i) {
        const complex lo = in[i], hi = in[i + mask];
        out[i] += complex(c * hi.imag(), -c * hi.real());
        out[i + mask] += complex(-c * lo.imag(), c * lo.real());
      }
    }
  }
}

}  // namespace kernel

}  // namespace qaa
