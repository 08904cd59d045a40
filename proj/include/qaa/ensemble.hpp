#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qaa/evolve.hpp"
#include "qaa/model.hpp"
#include "qaa/schedule.hpp"
#include "qaa/steering.hpp"

namespace qaa {

// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x);

// Counter-based field draw: a pure function of (master_seed, realization,
// site), bit-identical on every platform and independent of scheduling
// order. Values are uniform on [-width, width).
double sample_field(std::uint64_t master_seed, std::uint64_t realization,
                    std::uint64_t site, double width);

std::vector<double> sample_fields(int n_spins, double width,
                                  std::uint64_t master_seed,
                                  std::uint64_t realization);

struct EnsembleSpec {
  int n_spins = 12;
  double coupling = 0.1;
  double disorder_width = 1.0;
  double transverse_field = 10.0;
  Boundary boundary = Boundary::Ring;
  int n_realizations = 100;
  std::uint64_t master_seed = 123456789;
  double t_a = 1.0;
  SteeringMode mode;
  Schedule schedule;
  bool compute_levels = false;
  // Test hook: negate every drawn field. Spin-flip symmetry makes all mean
  // observables invariant under this, bit-exactly for the matrix-free modes.
  bool flip_fields = false;

  void validate() const;
};

struct RealizationRecord {
  int index = 0;
  double P1 = 0.0;
  double naive_success = 0.0;
  double norm_drift = 0.0;
  long steps_taken = 0;
  long rejected_steps = 0;
};

struct EnsembleResult {
  double mean_P1 = 0.0;
  double stderr_P1 = 0.0;  // sample standard deviation / sqrt(n)
  double min_P1 = 1.0;
  double mean_naive_success = 0.0;
  int n_realizations = 0;
  // Level-resolved statistics (only when compute_levels was set): mean_Pn[n-1]
  // averages each instance's own n-th level weight; S_N is its prefix sum;
  // mean_Pn_naive is the level histogram of the classical baseline.
  std::optional<std::vector<double>> mean_Pn;
  std::optional<std::vector<double>> S_N;
  std::optional<std::vector<double>> mean_Pn_naive;
  std::optional<std::vector<RealizationRecord>> records;
};

DisorderInstance draw_instance(const EnsembleSpec& spec, int realization_index);

struct EnsembleOptions {
  int jobs = 0;  // <= 0 selects hardware concurrency
  bool keep_records = false;
  std::ostream* audit = nullptr;  // per-realization NDJSON lines, index order
};

// Evolves every realization (worker pool, one realization per task) and
// aggregates in ascending index order with compensated summation, so the
// result is bit-identical for any thread count. The first failing
// realization (lowest index) aborts the whole ensemble with its seed and
// index in the error message.
EnsembleResult run_ensemble(const EnsembleSpec& spec,
                            const IntegratorConfig& cfg,
                            const EnsembleOptions& opts = {});

// Prefix sums of level means (compensated, in level order).
std::vector<double> cumulative_levels(const std::vector<double>& mean_Pn);

// Smallest 1-based N with S_N >= threshold; returns S_N.size() if never.
int smallest_count_reaching(const std::vector<double>& S_N, double threshold);

}  // namespace qaa
