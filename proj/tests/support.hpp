#pragma once

// Dense oracles for the matrix-free code paths, built from explicit
// Kronecker products and matrix exponentials so they share no kernels with
// the library.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "qaa/model.hpp"
#include "qaa/schedule.hpp"
#include "qaa/state.hpp"
#include "qaa/types.hpp"

namespace qaa::test {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

inline MatrixXcd pauli(PauliAxis axis) {
  // Basis row/col 0 is sigma_z = +1 (bit 0 of the index).
  MatrixXcd m(2, 2);
  const complex i01(0.0, 1.0);
  switch (axis) {
    case PauliAxis::X: m << 0, 1, 1, 0; break;
    case PauliAxis::Y: m << 0, -i01, i01, 0; break;
    case PauliAxis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// op on `site`, identity elsewhere. Site k is bit k of the basis index, so
// it is the k-th factor from the right in the Kronecker chain.
inline MatrixXcd one_site(int n_spins, int site, const MatrixXcd& op) {
  const auto eye = [](int q) {
    return MatrixXcd(MatrixXcd::Identity(1 << q, 1 << q));
  };
  return kron(eye(n_spins - 1 - site), kron(op, eye(site)));
}

inline MatrixXcd dense_initial(const DisorderInstance& inst) {
  const int L = inst.n_spins;
  MatrixXcd h = MatrixXcd::Zero(1 << L, 1 << L);
  for (int k = 0; k < L; ++k) {
    h += inst.transverse_field * one_site(L, k, pauli(PauliAxis::X));
  }
  return h;
}

inline MatrixXcd dense_problem(const DisorderInstance& inst) {
  const int L = inst.n_spins;
  MatrixXcd h = MatrixXcd::Zero(1 << L, 1 << L);
  for (int k = 0; k < L; ++k) {
    h += inst.fields[static_cast<std::size_t>(k)] *
         one_site(L, k, pauli(PauliAxis::Z));
  }
  const int n_bonds =
      inst.boundary == Boundary::Ring && L >= 3 ? L : L - 1;
  for (int b = 0; b < n_bonds; ++b) {
    h += inst.coupling * one_site(L, b, pauli(PauliAxis::Z)) *
         one_site(L, (b + 1) % L, pauli(PauliAxis::Z));
  }
  return h;
}

inline VectorXcd to_eigen(const StateVector& s) {
  VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

inline StateVector to_state(int n_spins, const VectorXcd& v) {
  std::vector<complex> amp(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) amp[static_cast<std::size_t>(i)] = v[i];
  return StateVector(n_spins, std::move(amp));
}

// Midpoint-sampled product of dense exponentials; second-order in dt.
inline VectorXcd propagate_dense(const std::function<MatrixXcd(double)>& h_of_t,
                                 double t0, double t1, double dt,
                                 VectorXcd psi) {
  const int steps = static_cast<int>(std::ceil((t1 - t0) / dt));
  const double h = (t1 - t0) / steps;
  const complex mi(0.0, -1.0);
  for (int s = 0; s < steps; ++s) {
    const double tm = t0 + (s + 0.5) * h;
    psi = (mi * h * h_of_t(tm)).exp() * psi;
  }
  return psi;
}

inline DisorderInstance random_instance(std::mt19937_64& rng, int L, double J,
                                        Boundary boundary,
                                        double width = 1.0, double h0 = 10.0) {
  std::uniform_real_distribution<double> u(-width, width);
  DisorderInstance inst;
  inst.n_spins = L;
  inst.coupling = J;
  inst.transverse_field = h0;
  inst.disorder_width = width;
  inst.boundary = boundary;
  inst.fields.resize(static_cast<std::size_t>(L));
  for (double& h : inst.fields) h = u(rng);
  inst.validate();
  return inst;
}

inline StateVector random_state(std::mt19937_64& rng, int L) {
  std::normal_distribution<double> g;
  std::vector<complex> amp(std::size_t{1} << L);
  double n2 = 0.0;
  for (complex& a : amp) {
    a = complex(g(rng), g(rng));
    n2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (complex& a : amp) a *= inv;
  return StateVector(L, std::move(amp));
}

inline double max_abs_diff(std::span<const complex> a,
                           std::span<const complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// |<a|b>|^2 for unit vectors.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

}  // namespace qaa::test
