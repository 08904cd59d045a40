#include "qaa/ensemble.hpp"

#include "qaa/numeric_format.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace qaa {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double sample_field(std::uint64_t master_seed, std::uint64_t realization,
                    std::uint64_t site, double width) {
  const std::uint64_t word =
      splitmix64(splitmix64(splitmix64(master_seed) ^ realization) ^ site);
  const double unit = static_cast<double>(word >> 11) * 0x1.0p-53;  // [0, 1)
  return width * (2.0 * unit - 1.0);
}

std::vector<double> sample_fields(int n_spins, double width,
                                  std::uint64_t master_seed,
                                  std::uint64_t realization) {
  std::vector<double> h(static_cast<std::size_t>(n_spins));
  for (int k = 0; k < n_spins; ++k) {
    h[static_cast<std::size_t>(k)] =
        sample_field(master_seed, realization, static_cast<std::uint64_t>(k),
                     width);
  }
  return h;
}

void EnsembleSpec::validate() const {
  if (n_realizations < 1) {
    throw ConfigError("n_realizations must be at least 1");
  }
  draw_instance(*this, 0).validate();
}

DisorderInstance draw_instance(const EnsembleSpec& spec,
                               int realization_index) {
  DisorderInstance inst;
  inst.n_spins = spec.n_spins;
  inst.coupling = spec.coupling;
  inst.fields = sample_fields(spec.n_spins, spec.disorder_width,
                              spec.master_seed,
                              static_cast<std::uint64_t>(realization_index));
  if (spec.flip_fields) {
    for (double& h : inst.fields) h = -h;
  }
  inst.transverse_field = spec.transverse_field;
  inst.disorder_width = spec.disorder_width;
  inst.boundary = spec.boundary;
  return inst;
}

namespace {

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

struct RealizationOutput {
  RealizationRecord record;
  std::vector<double> Pn;
  std::size_t naive_rank = 0;
};

struct SlotValue {
  std::exception_ptr error;
  RealizationOutput output;
};

}  // namespace

EnsembleResult run_ensemble(const EnsembleSpec& spec,
                            const IntegratorConfig& cfg,
                            const EnsembleOptions& opts) {
  spec.validate();
  cfg.validate();
  const int n = spec.n_realizations;
  int jobs = opts.jobs > 0
                 ? opts.jobs
                 : static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, n);

  std::atomic<int> next_task{0};
  std::atomic<bool> stop{false};

  std::mutex mu;
  std::condition_variable slot_ready;
  std::condition_variable window_open;
  std::map<int, SlotValue> slots;
  int next_consumed = 0;
  // Backpressure: workers stay within a bounded index window of the reducer
  // so level arrays from out-of-order completions cannot pile up.
  const int window = 4 * jobs + 16;

  const auto worker = [&]() {
    while (!stop.load(std::memory_order_relaxed)) {
      const int i = next_task.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      {
        std::unique_lock lock(mu);
        window_open.wait(lock, [&] {
          return stop.load(std::memory_order_relaxed) ||
                 i < next_consumed + window;
        });
        if (stop.load(std::memory_order_relaxed)) return;
      }
      SlotValue value;
      try {
        const DisorderInstance inst = draw_instance(spec, i);
        const RunResult run = evolve(inst, spec.schedule, spec.mode, spec.t_a,
                                     cfg, spec.compute_levels);
        const ProblemSpectrum spectrum = sorted_spectrum(inst);
        const std::vector<BasisConfig> manifold = ground_manifold(spectrum);

        RealizationOutput out;
        out.record.index = i;
        out.record.P1 = run.P1;
        out.record.naive_success = naive_success(inst, manifold);
        out.record.norm_drift = run.norm_drift;
        out.record.steps_taken = run.steps_taken;
        out.record.rejected_steps = run.rejected_steps;
        if (spec.compute_levels) {
          out.Pn = *run.Pn;
          const BasisConfig naive = naive_solution(inst);
          const auto it = std::find(spectrum.configs.begin(),
                                    spectrum.configs.end(), naive);
          out.naive_rank = static_cast<std::size_t>(
              it - spectrum.configs.begin());
        }
        value.output = std::move(out);
      } catch (...) {
        value.error = std::current_exception();
      }
      {
        std::lock_guard lock(mu);
        slots.emplace(i, std::move(value));
      }
      slot_ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);

  const std::size_t dim = std::size_t{1} << spec.n_spins;
  KahanSum p1_sum, naive_sum;
  std::vector<double> p1_values;
  p1_values.reserve(static_cast<std::size_t>(n));
  double min_p1 = 1.0;
  std::vector<KahanSum> pn_sum;
  std::vector<double> naive_hist;
  if (spec.compute_levels) {
    pn_sum.assign(dim, KahanSum{});
    naive_hist.assign(dim, 0.0);
  }
  std::vector<RealizationRecord> records;
  if (opts.keep_records) records.reserve(static_cast<std::size_t>(n));

  std::exception_ptr failure;
  for (int i = 0; i < n && !failure; ++i) {
    SlotValue value;
    {
      std::unique_lock lock(mu);
      slot_ready.wait(lock, [&] { return slots.count(i) != 0; });
      value = std::move(slots.at(i));
      slots.erase(i);
      next_consumed = i + 1;
    }
    window_open.notify_all();
    if (value.error) {
      failure = value.error;
      break;
    }
    const RealizationRecord& rec = value.output.record;
    p1_sum.add(rec.P1);
    p1_values.push_back(rec.P1);
    naive_sum.add(rec.naive_success);
    min_p1 = std::min(min_p1, rec.P1);
    if (spec.compute_levels) {
      for (std::size_t k = 0; k < dim; ++k) {
        pn_sum[k].add(value.output.Pn[k]);
      }
      naive_hist[value.output.naive_rank] += 1.0;
    }
    if (opts.keep_records) records.push_back(rec);
    if (opts.audit) {
      std::ostream& os = *opts.audit;
      os << "{\"index\":" << rec.index << ",\"seed\":" << spec.master_seed
         << ",\"P1\":" << format_double(rec.P1)
         << ",\"naive\":" << format_double(rec.naive_success)
         << ",\"norm_drift\":" << format_double(rec.norm_drift)
         << ",\"steps\":" << rec.steps_taken << "}\n";
    }
  }

  stop.store(true, std::memory_order_relaxed);
  window_open.notify_all();
  for (std::thread& th : pool) th.join();

  if (failure) {
    const int failed_index = next_consumed - 1;
    try {
      std::rethrow_exception(failure);
    } catch (const IntegrationError& e) {
      throw IntegrationError("realization " + std::to_string(failed_index) +
                                 " (seed " + std::to_string(spec.master_seed) +
                                 ") failed: " + e.what(),
                             e.tau());
    } catch (const DegenerateGapError& e) {
      throw DegenerateGapError(
          "realization " + std::to_string(failed_index) + " (seed " +
              std::to_string(spec.master_seed) + ") failed: " + e.what(),
          e.tau());
    }
    // Anything else propagates unchanged.
  }

  EnsembleResult result;
  result.n_realizations = n;
  result.mean_P1 = p1_sum.sum / n;
  result.min_P1 = min_p1;
  result.mean_naive_success = naive_sum.sum / n;
  if (n > 1) {
    KahanSum var;
    for (const double p : p1_values) {
      const double d = p - result.mean_P1;
      var.add(d * d);
    }
    result.stderr_P1 = std::sqrt(var.sum / (n - 1)) / std::sqrt(double(n));
  }
  if (spec.compute_levels) {
    std::vector<double> mean_pn(dim), mean_naive(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      mean_pn[k] = pn_sum[k].sum / n;
      mean_naive[k] = naive_hist[k] / n;
    }
    result.S_N = cumulative_levels(mean_pn);
    result.mean_Pn = std::move(mean_pn);
    result.mean_Pn_naive = std::move(mean_naive);
  }
  if (opts.keep_records) result.records = std::move(records);
  return result;
}

std::vector<double> cumulative_levels(const std::vector<double>& mean_Pn) {
  std::vector<double> s(mean_Pn.size());
  KahanSum sum;
  for (std::size_t k = 0; k < mean_Pn.size(); ++k) {
    sum.add(mean_Pn[k]);
    s[k] = sum.sum;
  }
  return s;
}

int smallest_count_reaching(const std::vector<double>& S_N, double threshold) {
  for (std::size_t k = 0; k < S_N.size(); ++k) {
    if (S_N[k] >= threshold) return static_cast<int>(k) + 1;
  }
  return static_cast<int>(S_N.size());
}

}  // namespace qaa
