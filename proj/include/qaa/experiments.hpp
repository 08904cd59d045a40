#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qaa/ensemble.hpp"
#include "qaa/evolve.hpp"
#include "qaa/steering.hpp"

namespace qaa {

// Fully resolved experiment configuration. Each command starts from its own
// defaults, overlays an optional JSON config document, then CLI flags. The
// resolved document is echoed into every output header, and re-running that
// document reproduces the output byte for byte (minus the timestamp line).
struct ExperimentConfig {
  std::vector<int> L_list;
  std::vector<double> J_list;
  double disorder_width = 1.0;
  double transverse_field = 10.0;
  Boundary boundary = Boundary::Ring;

  std::vector<double> ta_list;
  std::vector<SteeringKind> modes;
  std::string schedule_name = "cos-sin";
  std::optional<double> cap;

  int n_realizations = 1000;
  std::uint64_t master_seed = 123456789;

  IntegratorConfig integrator;

  std::string out_path;    // empty writes to stdout
  std::string audit_path;  // optional NDJSON per-realization stream
  int jobs = 0;
  bool quick = false;
  std::string panel = "all";  // fig2 only: a | b | c | all

  // Serialization uses blocks {model, protocol, ensemble, integrator, output}.
  nlohmann::json to_json() const;
  // Overlays `doc` onto *this; unknown keys raise ConfigError.
  void apply_json(const nlohmann::json& doc);
  void apply_json_file(const std::string& path);

  Schedule schedule() const { return parse_schedule(schedule_name); }
  SteeringMode steering_mode(SteeringKind kind) const;
};

// Figure-preset commands. Each writes a self-describing CSV (header block of
// '#' lines with version, command, timestamp, and the resolved config)
// followed by the data rows. All of them stream per-point progress rows only
// to `out`; diagnostics go to stderr in the CLI layer.
void cmd_fig1(const ExperimentConfig& cfg, std::ostream& out);
void cmd_fig2(const ExperimentConfig& cfg, std::ostream& out);
void cmd_fig3(const ExperimentConfig& cfg, std::ostream& out);
void cmd_grid(const ExperimentConfig& cfg, std::ostream& out);
void cmd_cluster(const ExperimentConfig& cfg, std::ostream& out);
void cmd_run(const ExperimentConfig& cfg, std::ostream& out);

// Per-command default configurations (before overlays).
ExperimentConfig default_config_fig1();
ExperimentConfig default_config_fig2();
ExperimentConfig default_config_fig3();
ExperimentConfig default_config_grid();
ExperimentConfig default_config_cluster();
ExperimentConfig default_config_run();

// n log-spaced points from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace qaa
