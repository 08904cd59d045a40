#include "qaa/steering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qaa {

std::string to_string(SteeringKind kind) {
  switch (kind) {
    case SteeringKind::None: return "none";
    case SteeringKind::SingleSpin: return "single";
    case SteeringKind::Cluster: return "cluster";
    case SteeringKind::Exact: return "exact";
  }
  throw std::logic_error("unreachable steering kind");
}

SteeringKind parse_steering(const std::string& name) {
  if (name == "none") return SteeringKind::None;
  if (name == "single") return SteeringKind::SingleSpin;
  if (name == "cluster") return SteeringKind::Cluster;
  if (name == "exact") return SteeringKind::Exact;
  throw ConfigError("unknown steering mode '" + name +
                    "' (expected none|single|cluster|exact)");
}

std::array<double, 3> single_spin_steering_from_field(const EffectiveField& f) {
  const auto& B = f.B;
  const auto& dB = f.dBdt;
  const double norm = std::hypot(B[0], B[1], B[2]);
  if (!(norm > 1e-300)) {
    throw SingularFieldError("effective field vanishes; steering undefined");
  }
  const double inv = 1.0 / (2.0 * norm * norm);
  return {(B[1] * dB[2] - B[2] * dB[1]) * inv,
          (B[2] * dB[0] - B[0] * dB[2]) * inv,
          (B[0] * dB[1] - B[1] * dB[0]) * inv};
}

double single_spin_steering_coefficient(double tau, double h0, double hk,
                                        double t_a) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::domain_error("steering coefficient needs tau in [0, 1]");
  }
  if (!(t_a > 0.0)) {
    throw std::invalid_argument("annealing time must be positive");
  }
  if (tau == 0.0 || tau == 1.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * tau);
  const double s = std::sin(0.5 * std::numbers::pi * tau);
  const double c2 = c * c, s2 = s * s;
  const double num =
      -(h0 * hk) * std::numbers::pi * std::sin(std::numbers::pi * tau);
  const double den = 4.0 * t_a * (h0 * h0 * c2 * c2 + hk * hk * s2 * s2);
  // den == 0 in the interior forces h0 = hk = 0, where num == 0 as well.
  if (den == 0.0) return 0.0;
  return num / den;
}

double single_spin_coefficient_from_schedule(const ScheduleValues& sv,
                                             double h0, double hk,
                                             double t_a) {
  const double num =
      (h0 * hk) * (sv.f_final * sv.df_initial - sv.f_initial * sv.df_final);
  if (num == 0.0) return 0.0;
  const double den =
      2.0 * t_a *
      (h0 * h0 * sv.f_initial * sv.f_initial +
       hk * hk * sv.f_final * sv.f_final);
  if (den == 0.0) {
    throw SingularFieldError("steering coefficient singular: field vanished");
  }
  return num / den;
}

void fill_single_spin_coefficients(const DisorderInstance& inst,
                                   const ScheduleValues& sv, double t_a,
                                   std::span<double> out) {
  for (int k = 0; k < inst.n_spins; ++k) {
    out[k] = single_spin_coefficient_from_schedule(sv, inst.transverse_field,
                                                   inst.fields[k], t_a);
  }
}

StateVector apply_single_spin_steering(const DisorderInstance& inst,
                                       const Schedule& sched, double tau,
                                       double t_a, const StateVector& in) {
  inst.validate();
  if (in.n_spins() != inst.n_spins) {
    throw std::invalid_argument("state dimension does not match instance");
  }
  const ScheduleValues sv = sched.evaluate(tau);
  std::vector<double> coeff(inst.n_spins);
  fill_single_spin_coefficients(inst, sv, t_a, coeff);
  std::vector<complex> out(in.dim(), complex{0.0, 0.0});
  kernel::add_sigma_y_weighted(inst.n_spins, coeff, in.amplitudes(), out);
  return StateVector(inst.n_spins, std::move(out));
}

GroundCoupling ground_coupling_from_dense(const Eigen::MatrixXd& h,
                                          const Eigen::MatrixXd& dt_h,
                                          double gap_tol, double tau) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition did not converge");
  }
  const Eigen::VectorXd& energies = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const Eigen::Index dim = h.rows();
  if (dim >= 2 && energies[1] - energies[0] <= gap_tol) {
    throw DegenerateGapError(
        "ground state degenerate at tau=" + std::to_string(tau), tau);
  }
  GroundCoupling gc;
  gc.ground = vectors.col(0);
  const Eigen::VectorXd w = dt_h * gc.ground;
  gc.drive = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index m = 1; m < dim; ++m) {
    gc.drive += vectors.col(m) *
                (vectors.col(m).dot(w) / (energies[0] - energies[m]));
  }
  return gc;
}

void add_rank2_action(const Eigen::VectorXd& g, const Eigen::VectorXd& v,
                      std::span<const complex> in, std::span<complex> out) {
  complex gdot{0.0, 0.0}, vdot{0.0, 0.0};
  const std::size_t dim = in.size();
  for (std::size_t i = 0; i < dim; ++i) {
    gdot += g[static_cast<Eigen::Index>(i)] * in[i];
    vdot += v[static_cast<Eigen::Index>(i)] * in[i];
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const complex z = v[static_cast<Eigen::Index>(i)] * gdot -
                      g[static_cast<Eigen::Index>(i)] * vdot;
    out[i] += complex(-z.imag(), z.real());  // i * z
  }
}

Eigen::MatrixXd dense_annealing_hamiltonian(const DisorderInstance& inst,
                                            const ScheduleValues& sv) {
  const std::vector<double> table = problem_energy_table(inst);
  const Eigen::Index dim = Eigen::Index{1} << inst.n_spins;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double x = sv.f_initial * inst.transverse_field;
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = sv.f_final * table[static_cast<std::size_t>(i)];
    for (int k = 0; k < inst.n_spins; ++k) {
      h(i ^ (Eigen::Index{1} << k), i) += x;
    }
  }
  return h;
}

Eigen::MatrixXd dense_annealing_derivative(const DisorderInstance& inst,
                                           const ScheduleValues& sv,
                                           double t_a) {
  const std::vector<double> table = problem_energy_table(inst);
  const Eigen::Index dim = Eigen::Index{1} << inst.n_spins;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double x = sv.df_initial / t_a * inst.transverse_field;
  const double z = sv.df_final / t_a;
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = z * table[static_cast<std::size_t>(i)];
    for (int k = 0; k < inst.n_spins; ++k) {
      h(i ^ (Eigen::Index{1} << k), i) += x;
    }
  }
  return h;
}

Eigen::MatrixXcd counterdiabatic_from_eigensystem(
    const Eigen::VectorXd& energies, const Eigen::MatrixXcd& eigenvectors,
    const Eigen::MatrixXcd& dt_h, double gap_tol, double tau) {
  const Eigen::Index dim = energies.size();
  if (dim >= 2 && energies[1] - energies[0] <= gap_tol) {
    throw DegenerateGapError(
        "ground state degenerate at tau=" + std::to_string(tau), tau);
  }
  const Eigen::VectorXcd g = eigenvectors.col(0);
  const Eigen::VectorXcd w = dt_h * g;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index m = 1; m < dim; ++m) {
    v += eigenvectors.col(m) *
         (eigenvectors.col(m).dot(w) / (energies[0] - energies[m]));
  }
  const complex unit_i{0.0, 1.0};
  return unit_i * (v * g.adjoint() - g * v.adjoint());
}

Eigen::MatrixXcd counterdiabatic_operator(const DisorderInstance& inst,
                                          const Schedule& sched, double tau,
                                          double t_a, double gap_tol) {
  inst.validate();
  if (!(t_a > 0.0)) {
    throw std::invalid_argument("annealing time must be positive");
  }
  const ScheduleValues sv = sched.evaluate(tau);
  const Eigen::MatrixXd h = dense_annealing_hamiltonian(inst, sv);
  const Eigen::MatrixXd dt_h = dense_annealing_derivative(inst, sv, t_a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition did not converge");
  }
  return counterdiabatic_from_eigensystem(
      solver.eigenvalues(), solver.eigenvectors().cast<complex>(), dt_h.cast<complex>(),
      gap_tol, tau);
}

StateVector apply_counterdiabatic(const DisorderInstance& inst,
                                  const Schedule& sched, double tau, double t_a,
                                  const StateVector& in, double gap_tol) {
  inst.validate();
  if (in.n_spins() != inst.n_spins) {
    throw std::invalid_argument("state dimension does not match instance");
  }
  const ScheduleValues sv = sched.evaluate(tau);
  const GroundCoupling gc =
      ground_coupling_from_dense(dense_annealing_hamiltonian(inst, sv),
                                 dense_annealing_derivative(inst, sv, t_a),
                                 gap_tol, tau);
  std::vector<complex> out(in.dim(), complex{0.0, 0.0});
  add_rank2_action(gc.ground, gc.drive, in.amplitudes(), out);
  return StateVector(inst.n_spins, std::move(out));
}

ClusterSites select_cluster(const DisorderInstance& inst) {
  inst.validate();
  const int L = inst.n_spins;
  if (L < 3) {
    throw ConfigError("cluster steering needs at least 3 spins");
  }
  int center = 0;
  for (int k = 1; k < L; ++k) {
    if (std::abs(inst.fields[k]) < std::abs(inst.fields[center])) center = k;
  }
  if (inst.boundary == Boundary::Ring) {
    return {(center + L - 1) % L, center, (center + 1) % L};
  }
  // Open chain: clamp an edge minimum to the end trio; the weakest spin then
  // occupies an outer slot but the trio stays chain-connected.
  const int c = std::clamp(center, 1, L - 2);
  return {c - 1, c, c + 1};
}

DisorderInstance trio_instance(const DisorderInstance& inst,
                               ClusterSites sites) {
  DisorderInstance trio;
  trio.n_spins = 3;
  trio.coupling = inst.coupling;
  trio.fields = {inst.fields[sites.left], inst.fields[sites.center],
                 inst.fields[sites.right]};
  trio.transverse_field = inst.transverse_field;
  trio.disorder_width = inst.disorder_width;
  trio.boundary = Boundary::OpenChain;
  return trio;
}

Eigen::MatrixXcd cluster_trio_operator(const DisorderInstance& inst,
                                       const Schedule& sched, double tau,
                                       double t_a, double gap_tol) {
  const ClusterSites sites = select_cluster(inst);
  return counterdiabatic_operator(trio_instance(inst, sites), sched, tau, t_a,
                                  gap_tol);
}

TrioEmbedding::TrioEmbedding(int n_spins, ClusterSites sites) : sites_(sites) {
  const std::uint64_t ml = std::uint64_t{1} << sites.left;
  const std::uint64_t mc = std::uint64_t{1} << sites.center;
  const std::uint64_t mr = std::uint64_t{1} << sites.right;
  for (std::uint64_t t = 0; t < 8; ++t) {
    offsets_[t] = (t & 1 ? ml : 0) | (t & 2 ? mc : 0) | (t & 4 ? mr : 0);
  }
  const std::uint64_t trio_mask = ml | mc | mr;
  const std::uint64_t dim = std::uint64_t{1} << n_spins;
  bases_.reserve(dim >> 3);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & trio_mask) == 0) bases_.push_back(i);
  }
}

void TrioEmbedding::add_rank2(const Eigen::VectorXd& g, const Eigen::VectorXd& v,
                              std::span<const complex> in,
                              std::span<complex> out) const {
  for (const std::uint64_t base : bases_) {
    complex gdot{0.0, 0.0}, vdot{0.0, 0.0};
    for (int t = 0; t < 8; ++t) {
      const complex a = in[base | offsets_[static_cast<std::size_t>(t)]];
      gdot += g[t] * a;
      vdot += v[t] * a;
    }
    for (int t = 0; t < 8; ++t) {
      const complex z = v[t] * gdot - g[t] * vdot;
      out[base | offsets_[static_cast<std::size_t>(t)]] +=
          complex(-z.imag(), z.real());
    }
  }
}

StateVector apply_cluster_steering(const DisorderInstance& inst,
                                   const Schedule& sched, double tau,
                                   double t_a, const StateVector& in,
                                   double gap_tol) {
  inst.validate();
  if (in.n_spins() != inst.n_spins) {
    throw std::invalid_argument("state dimension does not match instance");
  }
  const ClusterSites sites = select_cluster(inst);
  const DisorderInstance trio = trio_instance(inst, sites);
  const ScheduleValues sv = sched.evaluate(tau);
  const GroundCoupling gc =
      ground_coupling_from_dense(dense_annealing_hamiltonian(trio, sv),
                                 dense_annealing_derivative(trio, sv, t_a),
                                 gap_tol, tau);
  std::vector<complex> out(in.dim(), complex{0.0, 0.0});
  const TrioEmbedding embedding(inst.n_spins, sites);
  embedding.add_rank2(gc.ground, gc.drive, in.amplitudes(), out);
  std::vector<double> coeff(inst.n_spins);
  fill_single_spin_coefficients(inst, sv, t_a, coeff);
  coeff[static_cast<std::size_t>(sites.left)] = 0.0;
  coeff[static_cast<std::size_t>(sites.center)] = 0.0;
  coeff[static_cast<std::size_t>(sites.right)] = 0.0;
  kernel::add_sigma_y_weighted(inst.n_spins, coeff, in.amplitudes(), out);
  return StateVector(inst.n_spins, std::move(out));
}

}  // namespace qaa
