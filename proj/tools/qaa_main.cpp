// Command-line front end: figure-preset sweeps and generic ensemble runs,
// emitted as self-describing CSV.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qaa/experiments.hpp"
#include "qaa/version.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string out_path;
  std::string audit_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::vector<std::string> steering;
  std::optional<int> jobs;
  bool quick = false;
  std::optional<double> rtol;
  std::optional<double> atol;
  std::optional<double> max_step;
  std::optional<double> cap;
  std::string schedule;
  std::vector<int> L_list;
  std::vector<double> J_list;
  std::vector<double> ta_list;
  std::string panel;
};

void add_common_flags(CLI::App* cmd, CliOverrides& ov) {
  cmd->add_option("--config", ov.config_path,
                  "JSON config file applied before other flags");
  cmd->add_option("--out", ov.out_path, "CSV output path (default: stdout)");
  cmd->add_option("--audit", ov.audit_path,
                  "NDJSON per-realization audit log path");
  cmd->add_option("--seed", ov.seed, "master seed for disorder draws");
  cmd->add_option("--realizations", ov.realizations,
                  "disorder realizations per point");
  cmd->add_option("--steering", ov.steering,
                  "steering modes (none|single|cluster|exact), repeatable");
  cmd->add_option("--jobs", ov.jobs, "worker threads (0 = hardware)");
  cmd->add_flag("--quick", ov.quick,
                "reduced preset: at most 200 realizations, smaller systems");
  cmd->add_option("--rtol", ov.rtol, "integrator relative tolerance");
  cmd->add_option("--atol", ov.atol, "integrator absolute tolerance");
  cmd->add_option("--max-step", ov.max_step,
                  "integrator max step (0 = automatic)");
  cmd->add_option("--cap-steering", ov.cap,
                  "clamp steering operator norm to this value");
  cmd->add_option("--schedule", ov.schedule, "annealing schedule name");
  cmd->add_option("--L", ov.L_list, "system sizes, repeatable");
  cmd->add_option("--J", ov.J_list, "couplings, repeatable");
  cmd->add_option("--ta", ov.ta_list, "annealing times, repeatable");
}

qaa::ExperimentConfig resolve(const qaa::ExperimentConfig& defaults,
                              const CliOverrides& ov) {
  qaa::ExperimentConfig cfg = defaults;
  if (!ov.config_path.empty()) cfg.apply_json_file(ov.config_path);
  if (!ov.out_path.empty()) cfg.out_path = ov.out_path;
  if (!ov.audit_path.empty()) cfg.audit_path = ov.audit_path;
  if (ov.seed) cfg.master_seed = *ov.seed;
  if (ov.realizations) cfg.n_realizations = *ov.realizations;
  if (!ov.steering.empty()) {
    cfg.modes.clear();
    for (const std::string& name : ov.steering) {
      cfg.modes.push_back(qaa::parse_steering(name));
    }
  }
  if (ov.jobs) cfg.jobs = *ov.jobs;
  if (ov.quick) cfg.quick = true;
  if (ov.rtol) cfg.integrator.rtol = *ov.rtol;
  if (ov.atol) cfg.integrator.atol = *ov.atol;
  if (ov.max_step) cfg.integrator.max_step = *ov.max_step;
  if (ov.cap) cfg.cap = *ov.cap;
  if (!ov.schedule.empty()) {
    qaa::parse_schedule(ov.schedule);  // validate eagerly
    cfg.schedule_name = ov.schedule;
  }
  if (!ov.L_list.empty()) cfg.L_list = ov.L_list;
  if (!ov.J_list.empty()) cfg.J_list = ov.J_list;
  if (!ov.ta_list.empty()) cfg.ta_list = ov.ta_list;
  if (!ov.panel.empty()) cfg.panel = ov.panel;
  cfg.integrator.validate();
  if (cfg.n_realizations < 1) {
    throw qaa::ConfigError("realizations must be at least 1");
  }
  return cfg;
}

int dispatch(const qaa::ExperimentConfig& cfg,
             const std::function<void(const qaa::ExperimentConfig&,
                                      std::ostream&)>& command) {
  if (cfg.out_path.empty()) {
    command(cfg, std::cout);
    return 0;
  }
  std::ofstream out(cfg.out_path);
  if (!out) {
    throw qaa::ConfigError("cannot open output file '" + cfg.out_path + "'");
  }
  command(cfg, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steered quantum annealing simulator for the 1D random-field "
               "Ising model"};
  app.set_version_flag("--version", std::string("qaa-sim ") + qaa::k_version);
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    qaa::ExperimentConfig defaults;
    void (*command)(const qaa::ExperimentConfig&, std::ostream&);
    CliOverrides ov;
    CLI::App* cmd = nullptr;
  };

  std::vector<Entry> entries;
  entries.push_back({"fig1", "small-system time sweep (1 and 3 spins)",
                     qaa::default_config_fig1(), &qaa::cmd_fig1, {}, nullptr});
  entries.push_back({"fig2",
                     "ensemble success probability: time sweep and coupling "
                     "sweeps",
                     qaa::default_config_fig2(), &qaa::cmd_fig2, {}, nullptr});
  entries.push_back({"fig3", "energy-level occupation statistics",
                     qaa::default_config_fig3(), &qaa::cmd_fig3, {}, nullptr});
  entries.push_back({"grid",
                     "coupling/time grid comparing naive, plain, and steered "
                     "protocols",
                     qaa::default_config_grid(), &qaa::cmd_grid, {}, nullptr});
  entries.push_back({"cluster",
                     "cluster steering versus single-spin steering at strong "
                     "coupling",
                     qaa::default_config_cluster(), &qaa::cmd_cluster, {},
                     nullptr});
  entries.push_back({"run", "generic ensemble sweep over L, J, t_a, steering",
                     qaa::default_config_run(), &qaa::cmd_run, {}, nullptr});

  for (Entry& e : entries) {
    e.cmd = app.add_subcommand(e.name, e.help);
    add_common_flags(e.cmd, e.ov);
    if (std::string(e.name) == "fig2") {
      e.cmd->add_option("--panel", e.ov.panel, "panel to emit (a|b|c|all)");
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (Entry& e : entries) {
      if (e.cmd->parsed()) {
        return dispatch(resolve(e.defaults, e.ov), e.command);
      }
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const qaa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qaa::IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << "\n";
    return 3;
  } catch (const qaa::DegenerateGapError& e) {
    std::cerr << "degenerate gap: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
