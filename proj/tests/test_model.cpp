#include <doctest.h>

#include <cmath>
#include <vector>

#include "qaa/model.hpp"
#include "support.hpp"

using namespace qaa;

namespace {

DisorderInstance make(int L, double J, std::vector<double> h,
                      Boundary b = Boundary::OpenChain) {
  DisorderInstance inst;
  inst.n_spins = L;
  inst.coupling = J;
  inst.fields = std::move(h);
  inst.boundary = b;
  return inst;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("validate rejects malformed instances") {
  CHECK_THROWS_AS(make(0, 0.0, {}).validate(), ConfigError);
  CHECK_THROWS_AS(make(2, 0.0, {0.1}).validate(), ConfigError);  // count
  CHECK_THROWS_AS(make(1, 0.0, {1.5}).validate(), ConfigError);  // |h| > W
  CHECK_THROWS_AS(make(2, 0.0, {0.1, 0.2}, Boundary::Ring).validate(),
                  ConfigError);  // 2-site ring
  DisorderInstance bad_h0 = make(1, 0.0, {0.1});
  bad_h0.transverse_field = 0.0;
  CHECK_THROWS_AS(bad_h0.validate(), ConfigError);
  DisorderInstance bad_w = make(1, 0.0, {0.0});
  bad_w.disorder_width = -1.0;
  CHECK_THROWS_AS(bad_w.validate(), ConfigError);
  CHECK_NOTHROW(make(3, 0.5, {0.1, -0.2, 0.3}, Boundary::Ring).validate());
}

TEST_CASE("uncoupled two-spin energy table and sorted spectrum") {
  const DisorderInstance inst = make(2, 0.0, {0.5, -0.25});
  const std::vector<double> table = problem_energy_table(inst);
  REQUIRE(table.size() == 4);
  CHECK(table[0] == 0.25);   // both up: +0.5 - 0.25
  CHECK(table[1] == -0.75);  // site 0 down
  CHECK(table[2] == 0.75);   // site 1 down
  CHECK(table[3] == -0.25);  // both down

  const ProblemSpectrum sp = sorted_spectrum(inst);
  REQUIRE(sp.configs.size() == 4);
  CHECK(sp.configs[0].bits == 1);
  CHECK(sp.configs[1].bits == 3);
  CHECK(sp.configs[2].bits == 0);
  CHECK(sp.configs[3].bits == 2);
  CHECK(sp.ground_energy() == -0.75);
}

TEST_CASE("open-chain bond enters the table") {
  const DisorderInstance inst = make(2, 0.1, {0.5, -0.25});
  const std::vector<double> table = problem_energy_table(inst);
  CHECK(table[0] == doctest::Approx(0.35).epsilon(1e-15));  // 0.25 + J
}

TEST_CASE("table ties break by ascending configuration") {
  // Zero fields make every energy level twice degenerate.
  const DisorderInstance inst = make(2, 0.3, {0.0, 0.0});
  const ProblemSpectrum sp = sorted_spectrum(inst);
  CHECK(sp.energies[0] == sp.energies[1]);
  CHECK(sp.configs[0].bits < sp.configs[1].bits);
}

TEST_CASE("antiferromagnetic ring ground manifold is the two Neel states") {
  const DisorderInstance inst =
      make(4, 0.7, {0.0, 0.0, 0.0, 0.0}, Boundary::Ring);
  const ProblemSpectrum sp = sorted_spectrum(inst);
  CHECK(sp.ground_energy() == doctest::Approx(-4 * 0.7).epsilon(1e-15));
  const std::vector<BasisConfig> gm = ground_manifold(sp);
  REQUIRE(gm.size() == 2);
  CHECK(gm[0].bits == 5);   // 0101: alternating
  CHECK(gm[1].bits == 10);  // 1010
}

TEST_CASE("ground manifold is a singleton for generic fields") {
  const DisorderInstance inst = make(2, 0.0, {0.5, -0.5});
  const std::vector<BasisConfig> gm = ground_manifold(sorted_spectrum(inst));
  REQUIRE(gm.size() == 1);
  CHECK(gm[0].bits == 1);
}

TEST_CASE("ring and open chain differ by exactly the closing bond") {
  const std::vector<double> h{0.3, -0.1, 0.25};
  const DisorderInstance ring = make(3, 0.4, h, Boundary::Ring);
  const DisorderInstance open = make(3, 0.4, h, Boundary::OpenChain);
  const std::vector<double> tr = problem_energy_table(ring);
  const std::vector<double> to = problem_energy_table(open);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const BasisConfig c{static_cast<std::uint32_t>(i)};
    CHECK(tr[i] - to[i] ==
          doctest::Approx(0.4 * c.spin_z(2) * c.spin_z(0)).epsilon(1e-15));
  }
}

TEST_CASE("energy table matches the dense problem Hamiltonian diagonal") {
  std::mt19937_64 rng(21);
  for (Boundary b : {Boundary::Ring, Boundary::OpenChain}) {
    const DisorderInstance inst = test::random_instance(rng, 4, 0.6, b);
    const std::vector<double> table = problem_energy_table(inst);
    const test::MatrixXcd dense = test::dense_problem(inst);
    for (std::size_t i = 0; i < table.size(); ++i) {
      CHECK(table[i] ==
            doctest::Approx(dense(static_cast<Eigen::Index>(i),
                                  static_cast<Eigen::Index>(i))
                                .real())
                .epsilon(1e-13));
    }
  }
}

TEST_CASE("naive solution follows field signs, zero field counts as up") {
  CHECK(naive_solution(make(2, 0.0, {0.5, -0.25})).bits == 1);
  CHECK(naive_solution(make(3, 0.0, {0.0, 0.4, -0.2})).bits == 2);
  CHECK(naive_success(make(2, 0.0, {0.5, -0.25})) == 1.0);  // exact at J=0
}

TEST_CASE("naive baseline fails on a coupling-dominated ring") {
  const DisorderInstance inst =
      make(4, 1.0, {0.1, 0.1, 0.1, 0.1}, Boundary::Ring);
  CHECK(naive_solution(inst).bits == 15);
  CHECK(naive_success(inst) == 0.0);
}

TEST_CASE("initial ground state has alternating-sign uniform amplitudes") {
  const DisorderInstance inst = make(2, 0.0, {0.1, -0.1});
  const StateVector psi = initial_ground_state(inst);
  CHECK(psi[0] == complex(0.5, 0.0));
  CHECK(psi[1] == complex(-0.5, 0.0));
  CHECK(psi[2] == complex(-0.5, 0.0));
  CHECK(psi[3] == complex(0.5, 0.0));
}

TEST_CASE("initial state is an eigenstate of the transverse Hamiltonian") {
  std::mt19937_64 rng(22);
  const DisorderInstance inst =
      test::random_instance(rng, 5, 0.3, Boundary::Ring);
  const StateVector psi = initial_ground_state(inst);
  const StateVector hpsi = apply_initial_hamiltonian(inst, psi);
  const double e0 = -inst.transverse_field * inst.n_spins;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    CHECK(std::abs(hpsi[i] - e0 * psi[i]) < 1e-12);
  }
  CHECK(inner_product(psi, hpsi).real() == doctest::Approx(e0).epsilon(1e-13));
}

TEST_CASE("apply_initial_hamiltonian matches the dense transverse sum") {
  std::mt19937_64 rng(23);
  const DisorderInstance inst =
      test::random_instance(rng, 3, 0.2, Boundary::OpenChain);
  const StateVector in = test::random_state(rng, 3);
  const StateVector out = apply_initial_hamiltonian(inst, in);
  const test::VectorXcd want = test::dense_initial(inst) * test::to_eigen(in);
  CHECK(test::max_abs_diff(out.amplitudes(),
                           test::to_state(3, want).amplitudes()) < 1e-12);
}

TEST_SUITE_END();
