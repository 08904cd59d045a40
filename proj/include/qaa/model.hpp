#pragma once

#include <cstdint>
#include <vector>

#include "qaa/state.hpp"
#include "qaa/types.hpp"

namespace qaa {

// One realization of the random-field Ising problem: L spins on a ring or an
// open chain, uniform nearest-neighbor coupling, i.i.d. random longitudinal
// fields, and a uniform transverse field that defines the starting
// Hamiltonian. Immutable after validation; all operations below are
// read-only and thread-safe.
struct DisorderInstance {
  int n_spins = 0;
  double coupling = 0.0;              // J, in units of the disorder width
  std::vector<double> fields;         // h_k, one per site
  double transverse_field = 10.0;     // h0 > 0
  double disorder_width = 1.0;        // W; |h_k| <= W and all times are in 1/W
  Boundary boundary = Boundary::Ring;

  // Throws ConfigError on violation: L outside [1, 30], field count mismatch,
  // |h_k| > W, h0 <= 0, W <= 0, or a ring with fewer than 3 sites (a 2-site
  // ring would double-count its single bond).
  void validate() const;
};

// Exact spectrum of the diagonal problem Hamiltonian. Level n (1-based) is
// the n-th lowest energy; configs[n-1] is its spin configuration. Ties are
// broken by ascending configuration index so the order is deterministic.
struct ProblemSpectrum {
  std::vector<double> energies;
  std::vector<BasisConfig> configs;

  double ground_energy() const { return energies.front(); }
};

// Diagonal of the problem Hamiltonian: entry i is
// sum_k h_k sz_k(i) + J * sum_bonds sz_k(i) sz_k'(i), with sz_k(i) read from
// bit k of i (bit 0 means sz = +1). A ring closes the bond (L-1, 0); an open
// chain has L-1 bonds.
std::vector<double> problem_energy_table(const DisorderInstance& inst);

ProblemSpectrum sorted_spectrum(const DisorderInstance& inst);

// All configurations within tol of the minimum energy. The success
// probability P1 is defined as the summed weight over this set, which keeps
// symmetric instances (h = 0) well-defined.
std::vector<BasisConfig> ground_manifold(const ProblemSpectrum& spectrum,
                                         double tol = 1e-12);

// H_i |in> with H_i = h0 * sum_k sigma_x^(k).
StateVector apply_initial_hamiltonian(const DisorderInstance& inst,
                                      const StateVector& in);

// Exact ground state of H_i: every spin in the sigma_x = -1 eigenstate,
// amplitudes (-1)^popcount(i) * 2^(-L/2). This is the t = 0 state of every
// anneal.
StateVector initial_ground_state(const DisorderInstance& inst);

// Classical sign-following baseline: sz_k = -sign(h_k), with sz = +1 for an
// exactly zero field. Exact at J = 0, independent of annealing time.
BasisConfig naive_solution(const DisorderInstance& inst);

// 1.0 if the baseline configuration lies in the ground manifold, else 0.0.
double naive_success(const DisorderInstance& inst,
                     const std::vector<BasisConfig>& manifold);
double naive_success(const DisorderInstance& inst);

}  // namespace qaa
