#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qaa/evolve.hpp"
#include "support.hpp"

using namespace qaa;

namespace {

// Dense midpoint-exponential propagation of the lab-frame Schrodinger
// equation, steering included, sharing no code with the integrator.
StateVector dense_reference_evolution(const DisorderInstance& inst,
                                      const Schedule& sched, SteeringKind kind,
                                      double t_a, double dt) {
  const test::MatrixXcd hi = test::dense_initial(inst);
  const test::MatrixXcd hf = test::dense_problem(inst);
  const auto h_of_t = [&](double t) {
    const double tau = std::clamp(t / t_a, 0.0, 1.0);
    const ScheduleValues sv = sched.evaluate(tau);
    test::MatrixXcd h = sv.f_initial * hi + sv.f_final * hf;
    if (sv.df_initial == 0.0 && sv.df_final == 0.0) return h;
    if (kind == SteeringKind::SingleSpin) {
      for (int k = 0; k < inst.n_spins; ++k) {
        const double c = single_spin_steering_coefficient(
            tau, inst.transverse_field,
            inst.fields[static_cast<std::size_t>(k)], t_a);
        h += c * test::one_site(inst.n_spins, k, test::pauli(PauliAxis::Y));
      }
    } else if (kind == SteeringKind::Exact) {
      h += counterdiabatic_operator(inst, sched, tau, t_a);
    }
    return h;
  };
  const test::VectorXcd fin = test::propagate_dense(
      h_of_t, 0.0, t_a, dt, test::to_eigen(initial_ground_state(inst)));
  return test::to_state(inst.n_spins, fin);
}

}  // namespace

TEST_SUITE_BEGIN("evolve");

TEST_CASE("integrator config validation") {
  IntegratorConfig bad;
  bad.rtol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.min_step = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.max_step = 1e-13;  // below min_step
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.norm_drift_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  const IntegratorConfig cfg;
  CHECK(cfg.resolved_max_step(100.0, 10.0) == doctest::Approx(0.01));
  CHECK(cfg.resolved_max_step(0.5, 10.0) == doctest::Approx(0.0005));
}

TEST_CASE("frozen final Hamiltonian evolves pure diagonal phases") {
  std::mt19937_64 rng(61);
  const DisorderInstance inst =
      test::random_instance(rng, 3, 0.4, Boundary::Ring);
  const StateVector in = test::random_state(rng, 3);
  const double duration = 0.37;
  const StateVector out =
      evolve_frozen_tau(inst, Schedule{}, SteeringMode::none(), 1.0, 1.0,
                        duration, IntegratorConfig{}, in);
  const std::vector<double> table = problem_energy_table(inst);
  for (std::size_t i = 0; i < in.dim(); ++i) {
    const complex want = std::polar(1.0, -table[i] * duration) * in[i];
    CHECK(std::abs(out[i] - want) < 1e-7);
  }
}

TEST_CASE("frozen initial Hamiltonian evolves its eigenstate by one phase") {
  std::mt19937_64 rng(62);
  const DisorderInstance inst =
      test::random_instance(rng, 4, 0.3, Boundary::Ring);
  const StateVector psi0 = initial_ground_state(inst);
  const double duration = 0.21;
  const StateVector out =
      evolve_frozen_tau(inst, Schedule{}, SteeringMode::none(), 0.0, 1.0,
                        duration, IntegratorConfig{}, psi0);
  const double e0 = -inst.transverse_field * inst.n_spins;
  const complex phase = std::polar(1.0, -e0 * duration);
  for (std::size_t i = 0; i < psi0.dim(); ++i) {
    CHECK(std::abs(out[i] - phase * psi0[i]) < 1e-7);
  }
}

TEST_CASE("full anneal matches a dense midpoint-exponential propagator") {
  std::mt19937_64 rng(63);
  const Schedule sched;
  const double t_a = 0.7;

  SUBCASE("two spins, no steering, amplitudes including the restored phase") {
    const DisorderInstance inst =
        test::random_instance(rng, 2, 0.3, Boundary::OpenChain);
    const RunResult r = evolve(inst, sched, SteeringMode::none(), t_a);
    const StateVector want =
        dense_reference_evolution(inst, sched, SteeringKind::None, t_a, 1e-4);
    CHECK(test::fidelity(r.final_state, want) >= 1.0 - 1e-6);
    CHECK(test::max_abs_diff(r.final_state.amplitudes(), want.amplitudes()) <
          1e-5);
  }
  SUBCASE("three spins, each steering construction") {
    for (SteeringKind kind :
         {SteeringKind::None, SteeringKind::SingleSpin, SteeringKind::Exact}) {
      const DisorderInstance inst =
          test::random_instance(rng, 3, 0.5, Boundary::Ring);
      SteeringMode mode;
      mode.kind = kind;
      const RunResult r = evolve(inst, sched, mode, t_a);
      const StateVector want =
          dense_reference_evolution(inst, sched, kind, t_a, 1e-4);
      CHECK(test::fidelity(r.final_state, want) >= 1.0 - 1e-6);
    }
  }
}

TEST_CASE("forward-then-reversed integration returns to the start state") {
  std::mt19937_64 rng(64);
  const Schedule sched;
  for (SteeringMode mode : {SteeringMode::none(), SteeringMode::single_spin()}) {
    const DisorderInstance inst =
        test::random_instance(rng, 4, 0.6, Boundary::Ring);
    const double t_a = 1.0;
    const RunResult fwd = evolve(inst, sched, mode, t_a);
    const StateVector back =
        evolve_reversed(inst, sched, mode, t_a, IntegratorConfig{},
                        fwd.final_state);
    const StateVector psi0 = initial_ground_state(inst);
    CHECK(test::fidelity(back, psi0) >= 1.0 - 1e-6);
    CHECK(test::max_abs_diff(back.amplitudes(), psi0.amplitudes()) < 1e-5);
  }
}

TEST_CASE("slow anneal is adiabatic without steering") {
  DisorderInstance inst;
  inst.n_spins = 3;
  inst.coupling = 0.2;
  inst.fields = {0.8, -0.6, 0.7};
  inst.boundary = Boundary::Ring;
  const RunResult r = evolve(inst, Schedule{}, SteeringMode::none(), 60.0);
  CHECK(r.P1 >= 0.999);
}

TEST_CASE("exact steering is transitionless even on a fast anneal") {
  std::mt19937_64 rng(65);
  const DisorderInstance inst =
      test::random_instance(rng, 3, 0.8, Boundary::Ring);
  const RunResult r = evolve(inst, Schedule{}, SteeringMode::exact(), 0.3);
  CHECK(r.P1 >= 1.0 - 1e-6);
}

TEST_CASE("single-spin steering is exactly transitionless at J = 0") {
  std::mt19937_64 rng(66);
  const DisorderInstance inst =
      test::random_instance(rng, 4, 0.0, Boundary::Ring);
  const RunResult r = evolve(inst, Schedule{}, SteeringMode::single_spin(), 0.5);
  CHECK(r.P1 >= 1.0 - 1e-6);
}

TEST_CASE("norm drift stays within tolerance and is reported") {
  std::mt19937_64 rng(67);
  const DisorderInstance inst =
      test::random_instance(rng, 4, 0.4, Boundary::Ring);
  const RunResult r = evolve(inst, Schedule{}, SteeringMode::single_spin(), 1.0);
  CHECK(r.norm_drift <= 1e-9);
  CHECK(r.steps_taken > 0);
  CHECK(r.rejected_steps >= 0);
  CHECK(r.final_state.norm_squared() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("level-resolved weights are consistent with P1 and sum to one") {
  std::mt19937_64 rng(68);
  const DisorderInstance inst =
      test::random_instance(rng, 3, 0.3, Boundary::Ring);
  const RunResult r =
      evolve(inst, Schedule{}, SteeringMode::single_spin(), 1.0, {}, true);
  REQUIRE(r.Pn.has_value());
  REQUIRE(r.Pn->size() == 8);
  double sum = 0.0;
  for (double p : *r.Pn) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  // Generic fields: the ground manifold is the single lowest level.
  CHECK(r.P1 == (*r.Pn)[0]);

  const ProblemSpectrum sp = sorted_spectrum(inst);
  double p1 = 0.0;
  for (const BasisConfig& c : ground_manifold(sp)) {
    p1 += probability_of_configuration(r.final_state, c);
  }
  CHECK(r.P1 == p1);
}

TEST_CASE("field negation leaves P1 unchanged, bitwise for matrix-free modes") {
  std::mt19937_64 rng(69);
  const DisorderInstance inst =
      test::random_instance(rng, 3, 0.5, Boundary::Ring);
  DisorderInstance flipped = inst;
  for (double& h : flipped.fields) h = -h;

  for (SteeringMode mode : {SteeringMode::none(), SteeringMode::single_spin()}) {
    const RunResult a = evolve(inst, Schedule{}, mode, 1.0);
    const RunResult b = evolve(flipped, Schedule{}, mode, 1.0);
    CHECK(a.P1 == b.P1);  // no tolerance: identical step sequence
    CHECK(a.steps_taken == b.steps_taken);
    CHECK(a.rejected_steps == b.rejected_steps);
  }
  for (SteeringMode mode : {SteeringMode::exact(), SteeringMode::cluster()}) {
    const RunResult a = evolve(inst, Schedule{}, mode, 1.0);
    const RunResult b = evolve(flipped, Schedule{}, mode, 1.0);
    CHECK(std::abs(a.P1 - b.P1) < 1e-9);  // dense eigensolver is not
                                          // permutation-equivariant
  }
}

TEST_CASE("per-step error estimates shrink with the tolerances") {
  std::mt19937_64 rng(70);
  const DisorderInstance inst =
      test::random_instance(rng, 3, 0.4, Boundary::Ring);
  const Schedule sched;
  const auto run_at = [&](double rtol, double atol) {
    IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = atol;
    // Lift the step ceiling and the drift gate so the error tolerance is the
    // binding constraint at every level.
    cfg.max_step = 0.05;
    cfg.norm_drift_tol = 1e-3;
    return evolve(inst, sched, SteeringMode::single_spin(), 1.0, cfg);
  };
  const RunResult loose = run_at(1e-5, 1e-7);
  const RunResult mid = run_at(1e-7, 1e-9);
  const RunResult tight = run_at(1e-9, 1e-11);
  CHECK(loose.error_accumulated > mid.error_accumulated);
  CHECK(mid.error_accumulated > tight.error_accumulated);
  CHECK(tight.steps_taken > loose.steps_taken);

  const RunResult reference = run_at(1e-11, 1e-13);
  const double d_loose = test::max_abs_diff(loose.final_state.amplitudes(),
                                            reference.final_state.amplitudes());
  const double d_mid = test::max_abs_diff(mid.final_state.amplitudes(),
                                          reference.final_state.amplitudes());
  CHECK(d_mid < d_loose);
}

TEST_CASE("step-size underflow aborts with the anneal position attached") {
  std::mt19937_64 rng(71);
  const DisorderInstance inst =
      test::random_instance(rng, 2, 0.2, Boundary::OpenChain);
  IntegratorConfig cfg;
  cfg.rtol = 1e-14;
  cfg.atol = 1e-16;
  cfg.min_step = 0.2;  // guaranteed to underflow once a step is rejected
  try {
    evolve(inst, Schedule{}, SteeringMode::none(), 1.0, cfg);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.tau() >= 0.0);
    CHECK(e.tau() <= 1.0);
  }
}

TEST_SUITE_END();
