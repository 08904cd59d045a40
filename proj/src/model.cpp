#include "qaa/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace qaa {

void DisorderInstance::validate() const {
  if (n_spins < 1 || n_spins > 30) {
    throw ConfigError("L must be in [1, 30], got " + std::to_string(n_spins));
  }
  if (static_cast<int>(fields.size()) != n_spins) {
    throw ConfigError("field array has " + std::to_string(fields.size()) +
                      " entries for L=" + std::to_string(n_spins));
  }
  if (!(disorder_width > 0.0)) {
    throw ConfigError("disorder width must be positive");
  }
  for (int k = 0; k < n_spins; ++k) {
    if (!(std::abs(fields[k]) <= disorder_width)) {
      throw ConfigError("field h[" + std::to_string(k) + "]=" +
                        std::to_string(fields[k]) + " exceeds width " +
                        std::to_string(disorder_width));
    }
  }
  if (!(transverse_field > 0.0)) {
    throw ConfigError("transverse field must be positive");
  }
  if (boundary == Boundary::Ring && n_spins < 3) {
    throw ConfigError("a ring needs at least 3 sites; use an open chain");
  }
}

std::vector<double> problem_energy_table(const DisorderInstance& inst) {
  inst.validate();
  const int L = inst.n_spins;
  const std::size_t dim = std::size_t{1} << L;
  std::vector<double> table(dim);
  const int n_bonds =
      (inst.boundary == Boundary::Ring && L >= 3) ? L : (L - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    double e = 0.0;
    for (int k = 0; k < L; ++k) {
      const double sz = (i >> k) & 1u ? -1.0 : 1.0;
      e += inst.fields[k] * sz;
    }
    for (int b = 0; b < n_bonds; ++b) {
      const double sza = (i >> b) & 1u ? -1.0 : 1.0;
      const double szb = (i >> ((b + 1) % L)) & 1u ? -1.0 : 1.0;
      e += inst.coupling * (sza * szb);
    }
    table[i] = e;
  }
  return table;
}

ProblemSpectrum sorted_spectrum(const DisorderInstance& inst) {
  const std::vector<double> table = problem_energy_table(inst);
  std::vector<std::uint64_t> order(table.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint64_t a, std::uint64_t b) {
                     if (table[a] != table[b]) return table[a] < table[b];
                     return a < b;
                   });
  ProblemSpectrum spectrum;
  spectrum.energies.reserve(table.size());
  spectrum.configs.reserve(table.size());
  for (std::uint64_t i : order) {
    spectrum.energies.push_back(table[i]);
    spectrum.configs.push_back(BasisConfig{i});
  }
  return spectrum;
}

std::vector<BasisConfig> ground_manifold(const ProblemSpectrum& spectrum,
                                         double tol) {
  std::vector<BasisConfig> manifold;
  const double e0 = spectrum.ground_energy();
  for (std::size_t n = 0; n < spectrum.energies.size(); ++n) {
    if (spectrum.energies[n] - e0 > tol) break;
    manifold.push_back(spectrum.configs[n]);
  }
  return manifold;
}

StateVector apply_initial_hamiltonian(const DisorderInstance& inst,
                                      const StateVector& in) {
  inst.validate();
  if (in.n_spins() != inst.n_spins) {
    throw std::invalid_argument("state dimension does not match instance");
  }
  std::vector<complex> out(in.dim(), complex{0.0, 0.0});
  kernel::add_sigma_x_sum(inst.n_spins, inst.transverse_field, in.amplitudes(),
                          out);
  return StateVector(inst.n_spins, std::move(out));
}

StateVector initial_ground_state(const DisorderInstance& inst) {
  inst.validate();
  const std::size_t dim = std::size_t{1} << inst.n_spins;
  const double scale = std::pow(2.0, -0.5 * inst.n_spins);
  std::vector<complex> amp(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    amp[i] = complex(std::popcount(i) & 1 ? -scale : scale, 0.0);
  }
  return StateVector(inst.n_spins, std::move(amp));
}

BasisConfig naive_solution(const DisorderInstance& inst) {
  inst.validate();
  std::uint64_t bits = 0;
  for (int k = 0; k < inst.n_spins; ++k) {
    if (inst.fields[k] > 0.0) bits |= std::uint64_t{1} << k;
  }
  return BasisConfig{bits};
}

double naive_success(const DisorderInstance& inst,
                     const std::vector<BasisConfig>& manifold) {
  const BasisConfig naive = naive_solution(inst);
  for (const BasisConfig& c : manifold) {
    if (c == naive) return 1.0;
  }
  return 0.0;
}

double naive_success(const DisorderInstance& inst) {
  return naive_success(inst, ground_manifold(sorted_spectrum(inst)));
}

}  // namespace qaa
