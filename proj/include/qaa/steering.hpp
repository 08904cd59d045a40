#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>
#include <string>

#include "qaa/model.hpp"
#include "qaa/schedule.hpp"
#include "qaa/state.hpp"
#include "qaa/types.hpp"

namespace qaa {

enum class SteeringKind { None, SingleSpin, Cluster, Exact };

std::string to_string(SteeringKind kind);
SteeringKind parse_steering(const std::string& name);

// Protocol selector plus its guards. Exact mode costs a dense
// eigendecomposition per evaluation, so it is refused above exact_max_spins.
// The optional cap clamps the steering amplitude (coefficient magnitude for
// single-spin terms, operator norm for the dense constructions); default off.
struct SteeringMode {
  SteeringKind kind = SteeringKind::None;
  int exact_max_spins = 6;
  std::optional<double> cap;

  static SteeringMode none() { return {}; }
  static SteeringMode single_spin() { return {SteeringKind::SingleSpin}; }
  static SteeringMode cluster() { return {SteeringKind::Cluster}; }
  static SteeringMode exact(int max_spins = 6) {
    return {SteeringKind::Exact, max_spins};
  }
};

// Effective field seen by one spin and its time derivative.
struct EffectiveField {
  std::array<double, 3> B;
  std::array<double, 3> dBdt;
};

// Rotating-frame compensation for a single driven spin:
// c = (B x dBdt) / (2 |B|^2), so the steering Hamiltonian is c . sigma.
// Throws SingularFieldError when |B| <= 1e-300.
std::array<double, 3> single_spin_steering_from_field(const EffectiveField& f);

// Closed form of the sigma_y coefficient under the cos^2/sin^2 schedule:
//   -h0 hk pi sin(pi tau) / (4 t_a [h0^2 cos^4(pi tau/2) + hk^2 sin^4(pi tau/2)])
// Exactly 0 at tau = 0 and tau = 1; the 0/0 at (tau = 1, hk = 0) is a
// removable singularity and also returns 0.
double single_spin_steering_coefficient(double tau, double h0, double hk,
                                        double t_a);

// The same coefficient expressed through schedule values, valid for any
// schedule kind. Sign-antisymmetric in hk bit-exactly, which the spin-flip
// symmetry tests rely on.
double single_spin_coefficient_from_schedule(const ScheduleValues& sv,
                                             double h0, double hk, double t_a);

// Per-site sigma_y coefficients for the full chain at tau.
void fill_single_spin_coefficients(const DisorderInstance& inst,
                                   const ScheduleValues& sv, double t_a,
                                   std::span<double> out);

// sum_k c_k(tau) sigma_y^(k) |in>.
StateVector apply_single_spin_steering(const DisorderInstance& inst,
                                       const Schedule& sched, double tau,
                                       double t_a, const StateVector& in);

// Rank-2 ground-coupling data: the transitionless-driving operator restricted
// to transitions out of the instantaneous ground state is
//   H_s = i (v g^T - g v^T)
// with g the (real, unit) ground eigenvector and v the gap-weighted excited
// projection of dH0/dt applied to g; <g|v> = 0 and the operator norm is |v|.
struct GroundCoupling {
  Eigen::VectorXd ground;
  Eigen::VectorXd drive;
};

// Builds the rank-2 data from a real symmetric Hamiltonian and its time
// derivative. Throws DegenerateGapError(tau) when the ground gap <= gap_tol.
GroundCoupling ground_coupling_from_dense(const Eigen::MatrixXd& h,
                                          const Eigen::MatrixXd& dt_h,
                                          double gap_tol, double tau);

// out += i (v g^T - g v^T) |in> without materializing the operator.
void add_rank2_action(const Eigen::VectorXd& g, const Eigen::VectorXd& v,
                      std::span<const complex> in, std::span<complex> out);

// Dense steering-free Hamiltonian f_i H_i + f_f H_f and its time derivative
// (df_i H_i + df_f H_f) / t_a on the instance's full space. Test and
// reference paths only; the integrator never forms these at full size.
Eigen::MatrixXd dense_annealing_hamiltonian(const DisorderInstance& inst,
                                            const ScheduleValues& sv);
Eigen::MatrixXd dense_annealing_derivative(const DisorderInstance& inst,
                                           const ScheduleValues& sv, double t_a);

// Exact counterdiabatic operator at tau: eigendecomposes the steering-free
// Hamiltonian and assembles the ground-coupling terms
// i |m><m| dH0/dt |1><1| / (E_1 - E_m) + h.c. over all excited m.
Eigen::MatrixXcd counterdiabatic_operator(const DisorderInstance& inst,
                                          const Schedule& sched, double tau,
                                          double t_a, double gap_tol = 1e-10);

StateVector apply_counterdiabatic(const DisorderInstance& inst,
                                  const Schedule& sched, double tau, double t_a,
                                  const StateVector& in,
                                  double gap_tol = 1e-10);

// Assembly from an explicit eigensystem; the operator is built from
// projectors, so multiplying eigenvector columns by phases must not change
// the result (gauge invariance, tested).
Eigen::MatrixXcd counterdiabatic_from_eigensystem(
    const Eigen::VectorXd& energies, const Eigen::MatrixXcd& eigenvectors,
    const Eigen::MatrixXcd& dt_h, double gap_tol, double tau);

// Chain-ordered cluster around the weakest random field: center = argmin |h_k|
// (ties to the lowest index) with its two lattice neighbors, wrapping on a
// ring. On an open chain an edge minimum is clamped to the end trio, so the
// weakest spin then sits in an outer slot. Selection is static for the anneal.
struct ClusterSites {
  int left;
  int center;
  int right;
};

ClusterSites select_cluster(const DisorderInstance& inst);

// The trio as a standalone 3-spin open chain: fields of (left, center, right),
// the instance coupling on the two inner bonds, and no coupling to the rest.
DisorderInstance trio_instance(const DisorderInstance& inst, ClusterSites sites);

// The 8-dimensional counterdiabatic operator of the trio (bit 0 = left site).
Eigen::MatrixXcd cluster_trio_operator(const DisorderInstance& inst,
                                       const Schedule& sched, double tau,
                                       double t_a, double gap_tol = 1e-10);

// Scatter-gather embedding of a trio operator into the full register.
class TrioEmbedding {
 public:
  TrioEmbedding(int n_spins, ClusterSites sites);

  // out += [i (v g^T - g v^T)] (x) identity, with g and v over the trio space.
  void add_rank2(const Eigen::VectorXd& g, const Eigen::VectorXd& v,
                 std::span<const complex> in, std::span<complex> out) const;

  ClusterSites sites() const { return sites_; }

 private:
  ClusterSites sites_;
  std::array<std::uint64_t, 8> offsets_;
  std::vector<std::uint64_t> bases_;
};

// Full cluster steering term: trio counterdiabatic operator embedded on the
// cluster plus single-spin sigma_y terms on every site outside it (cluster
// sites receive no single-spin term).
StateVector apply_cluster_steering(const DisorderInstance& inst,
                                   const Schedule& sched, double tau,
                                   double t_a, const StateVector& in,
                                   double gap_tol = 1e-10);

}  // namespace qaa
