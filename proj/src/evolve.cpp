#include "qaa/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qaa {

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) {
    throw ConfigError("integrator tolerances must be positive");
  }
  if (!(min_step > 0.0)) {
    throw ConfigError("min_step must be positive");
  }
  if (max_step > 0.0 && !(max_step > min_step)) {
    throw ConfigError("max_step must exceed min_step");
  }
  if (!(norm_drift_tol > 0.0)) {
    throw ConfigError("norm_drift_tol must be positive");
  }
}

double IntegratorConfig::resolved_max_step(double t_a, double h0) const {
  if (max_step > 0.0) return max_step;
  return std::min(t_a / 1000.0, 0.1 / h0);
}

namespace {

// Dormand-Prince 5(4) tableau. b5 equals the last stage row (FSAL), so the
// seventh stage of an accepted step is the first stage of the next one.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b5 - b4 difference row for the embedded error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double norm_squared_of(std::span<const complex> v) {
  double sum = 0.0, comp = 0.0;
  for (const complex& a : v) {
    const double term = a.real() * a.real() + a.imag() * a.imag();
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

IntegrationStats integrate_schrodinger(const ActionFn& action, double t0,
                                       double t1, std::vector<complex>& psi,
                                       const IntegratorConfig& cfg,
                                       double max_step) {
  cfg.validate();
  if (!(t1 > t0)) {
    throw std::invalid_argument("integration interval is empty");
  }
  if (!(max_step > 0.0)) {
    throw std::invalid_argument("max_step must be positive");
  }
  const std::size_t dim = psi.size();
  std::vector<complex> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
      k7(dim), stage(dim), ynew(dim);

  // Norm change of a candidate step, summed over spin-flip orbits {i, ~i} in
  // a fixed order. Addition is commutative, so negating every field (which
  // permutes the basis by bitwise complement) reproduces the sum bit for bit
  // and the step controller below stays flip-symmetric.
  const std::size_t mask = dim - 1;
  const auto step_norm_change = [&](const std::vector<complex>& before,
                                    const std::vector<complex>& after) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const std::size_t j = ~i & mask;
      if (j < i) continue;
      const auto delta = [&](std::size_t k) {
        return (after[k].real() * after[k].real() +
                after[k].imag() * after[k].imag()) -
               (before[k].real() * before[k].real() +
                before[k].imag() * before[k].imag());
      };
      const double term = delta(i) + delta(j);
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    return sum;
  };

  // The equation is dpsi/dt = -i A(t) psi; each stage applies the action and
  // the -i factor is folded into the accumulation below via rotate().
  const auto rotate = [](const complex& z) {
    return complex(z.imag(), -z.real());  // -i * z
  };

  IntegrationStats stats;
  double t = t0;
  double h = max_step;

  action(t, psi, k1);
  for (std::size_t i = 0; i < dim; ++i) k1[i] = rotate(k1[i]);

  while (t < t1) {
    const double remaining = t1 - t;
    const bool final_step = remaining <= h;
    if (final_step) h = remaining;

    for (std::size_t i = 0; i < dim; ++i) {
      stage[i] = psi[i] + h * (a21 * k1[i]);
    }
    action(t + c2 * h, stage, k2);
    for (std::size_t i = 0; i < dim; ++i) {
      k2[i] = rotate(k2[i]);
      stage[i] = psi[i] + h * (a31 * k1[i] + a32 * k2[i]);
    }
    action(t + c3 * h, stage, k3);
    for (std::size_t i = 0; i < dim; ++i) {
      k3[i] = rotate(k3[i]);
      stage[i] = psi[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    }
    action(t + c4 * h, stage, k4);
    for (std::size_t i = 0; i < dim; ++i) {
      k4[i] = rotate(k4[i]);
      stage[i] =
          psi[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    action(t + c5 * h, stage, k5);
    for (std::size_t i = 0; i < dim; ++i) {
      k5[i] = rotate(k5[i]);
      stage[i] = psi[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                               a64 * k4[i] + a65 * k5[i]);
    }
    const double t_end = final_step ? t1 : t + h;
    action(t_end, stage, k6);
    for (std::size_t i = 0; i < dim; ++i) {
      k6[i] = rotate(k6[i]);
      ynew[i] = psi[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                              b5 * k5[i] + b6 * k6[i]);
    }
    action(t_end, ynew, k7);

    // Scaled max-norm error over real components; permutation-invariant.
    double err = 0.0;
    double abs_err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      k7[i] = rotate(k7[i]);
      const complex d = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double dre = std::abs(d.real());
      const double dim_ = std::abs(d.imag());
      const double sre = cfg.atol + cfg.rtol * std::max(std::abs(psi[i].real()),
                                                        std::abs(ynew[i].real()));
      const double sim = cfg.atol + cfg.rtol * std::max(std::abs(psi[i].imag()),
                                                        std::abs(ynew[i].imag()));
      err = std::max(err, std::max(dre / sre, dim_ / sim));
      abs_err = std::max(abs_err, std::max(dre, dim_));
    }

    // A step must also keep its norm change inside a budget proportional to
    // its share of the interval, so the cumulative drift stays below half of
    // norm_drift_tol by construction instead of by luck.
    bool accept = err <= 1.0;
    double drift_factor = 5.0;
    if (accept) {
      const double change = std::abs(step_norm_change(psi, ynew));
      // The floor keeps the budget above the rounding noise of the measured
      // norm change; otherwise the forced sliver step that closes the
      // interval would be rejected forever.
      const double budget =
          0.5 * cfg.norm_drift_tol * (h / (t1 - t0)) +
          8.0 * std::numeric_limits<double>::epsilon();
      if (change > budget) {
        accept = false;
        // The norm error of the fifth-order solution scales like h^6 while
        // the budget scales like h, so the ratio scales like h^5.
        drift_factor =
            std::clamp(0.9 * std::pow(budget / change, 0.2), 0.2, 1.0);
      }
    }

    if (accept) {
      psi.swap(ynew);
      k1.swap(k7);
      t = final_step ? t1 : t + h;
      ++stats.accepted;
      stats.error_accumulated += abs_err;

      const double drift = std::abs(norm_squared_of(psi) - 1.0);
      stats.max_norm_drift = std::max(stats.max_norm_drift, drift);
      if (drift > cfg.norm_drift_tol) {
        throw IntegrationError(
            "norm drift " + std::to_string(drift) +
                " exceeded tolerance; tighten rtol/atol",
            t / t1);
      }
    } else {
      ++stats.rejected;
    }

    if (t >= t1) break;
    double factor =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    factor = std::min(factor, drift_factor);
    h = std::min(h * factor, max_step);
    if (h < cfg.min_step) {
      throw IntegrationError(
          "step size underflow (stiff steering spike?)", t / t1);
    }
  }
  return stats;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_smooth(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double integrate_reference_phase(const AnnealHamiltonian& h) {
  const auto f = [&](double tau) { return h.reference_energy(tau); };
  return h.annealing_time() * integrate_smooth(f, 0.0, 1.0, 1e-12);
}

RunResult evolve(const DisorderInstance& inst, const Schedule& sched,
                 SteeringMode mode, double t_a, const IntegratorConfig& cfg,
                 bool compute_levels) {
  cfg.validate();
  AnnealHamiltonian ham(inst, sched, mode, t_a);
  const double max_step = cfg.resolved_max_step(t_a, inst.transverse_field);

  StateVector start = initial_ground_state(inst);
  std::vector<complex> psi(start.amplitudes().begin(),
                           start.amplitudes().end());

  const ActionFn action = [&](double t, std::span<const complex> in,
                              std::span<complex> out) {
    const double tau = std::clamp(t / t_a, 0.0, 1.0);
    ham.apply_shifted(tau, ham.reference_energy(tau), in, out);
  };
  const IntegrationStats stats =
      integrate_schrodinger(action, 0.0, t_a, psi, cfg, max_step);

  // Undo the gauge so the returned state is the lab-frame solution.
  const double theta = integrate_reference_phase(ham);
  const complex phase = std::polar(1.0, -theta);
  for (complex& a : psi) a *= phase;

  const ProblemSpectrum spectrum = sorted_spectrum(inst);
  const std::vector<BasisConfig> manifold = ground_manifold(spectrum);

  RunResult result{StateVector(inst.n_spins, std::move(psi))};
  result.norm_drift = stats.max_norm_drift;
  result.steps_taken = stats.accepted;
  result.rejected_steps = stats.rejected;
  result.error_accumulated = stats.error_accumulated;

  double p1 = 0.0;
  for (const BasisConfig& c : manifold) {
    p1 += probability_of_configuration(result.final_state, c);
  }
  result.P1 = p1;

  if (compute_levels) {
    std::vector<double> pn(spectrum.configs.size());
    for (std::size_t n = 0; n < pn.size(); ++n) {
      pn[n] =
          probability_of_configuration(result.final_state, spectrum.configs[n]);
    }
    result.Pn = std::move(pn);
  }
  return result;
}

StateVector evolve_frozen_tau(const DisorderInstance& inst,
                              const Schedule& sched, SteeringMode mode,
                              double tau0, double t_a, double duration,
                              const IntegratorConfig& cfg,
                              const StateVector& initial) {
  cfg.validate();
  AnnealHamiltonian ham(inst, sched, mode, t_a);
  std::vector<complex> psi(initial.amplitudes().begin(),
                           initial.amplitudes().end());
  const ActionFn action = [&](double, std::span<const complex> in,
                              std::span<complex> out) {
    ham.apply(tau0, in, out);
  };
  const double max_step =
      std::min(cfg.resolved_max_step(t_a, inst.transverse_field), duration);
  integrate_schrodinger(action, 0.0, duration, psi, cfg, max_step);
  return StateVector(inst.n_spins, std::move(psi));
}

StateVector evolve_reversed(const DisorderInstance& inst, const Schedule& sched,
                            SteeringMode mode, double t_a,
                            const IntegratorConfig& cfg,
                            const StateVector& final_state) {
  cfg.validate();
  AnnealHamiltonian ham(inst, sched, mode, t_a);
  std::vector<complex> psi(final_state.amplitudes().begin(),
                           final_state.amplitudes().end());
  const ActionFn action = [&](double s, std::span<const complex> in,
                              std::span<complex> out) {
    const double tau = std::clamp((t_a - s) / t_a, 0.0, 1.0);
    ham.apply_shifted(tau, ham.reference_energy(tau), in, out);
    for (complex& z : out) z = -z;
  };
  const double max_step = cfg.resolved_max_step(t_a, inst.transverse_field);
  integrate_schrodinger(action, 0.0, t_a, psi, cfg, max_step);
  const double theta = integrate_reference_phase(ham);
  const complex phase = std::polar(1.0, theta);
  for (complex& a : psi) a *= phase;
  return StateVector(inst.n_spins, std::move(psi));
}

}  // namespace qaa
