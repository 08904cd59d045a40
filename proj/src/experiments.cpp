#include "qaa/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>

#include "qaa/numeric_format.hpp"
#include "qaa/version.hpp"

namespace qaa {

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw ConfigError("log grid needs 0 < lo < hi and at least 2 points");
  }
  std::vector<double> pts(static_cast<std::size_t>(n));
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    pts[static_cast<std::size_t>(i)] =
        std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
  }
  pts.front() = lo;
  pts.back() = hi;
  return pts;
}

SteeringMode ExperimentConfig::steering_mode(SteeringKind kind) const {
  SteeringMode mode;
  mode.kind = kind;
  mode.cap = cap;
  return mode;
}

namespace {

std::string boundary_name(Boundary b) {
  return b == Boundary::Ring ? "ring" : "open";
}

Boundary parse_boundary(const std::string& name) {
  if (name == "ring") return Boundary::Ring;
  if (name == "open" || name == "open-chain" || name == "openchain") {
    return Boundary::OpenChain;
  }
  throw ConfigError("unknown boundary '" + name + "' (expected ring|open)");
}

template <typename T, typename Parse>
std::vector<T> list_or_scalar(const nlohmann::json& v, const char* field,
                              Parse parse) {
  std::vector<T> out;
  try {
    if (v.is_array()) {
      for (const auto& item : v) out.push_back(parse(item));
    } else {
      out.push_back(parse(v));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + field +
                      "': " + e.what());
  }
  if (out.empty()) {
    throw ConfigError(std::string("config field '") + field +
                      "' must not be an empty list");
  }
  return out;
}

void require_keys(const nlohmann::json& block, const char* name,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : block.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      throw ConfigError(std::string("unknown key '") + key + "' in config block '" +
                        name + "'");
    }
  }
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_header(std::ostream& out, const std::string& command,
                  const ExperimentConfig& cfg) {
  out << "# qaa-sim v" << k_version << "\n";
  out << "# command: " << command << "\n";
  out << "# generated: " << utc_timestamp() << "\n";
  out << "# config: " << cfg.to_json().dump() << "\n";
}

struct AuditFile {
  std::ofstream stream;
  std::ostream* get() { return stream.is_open() ? &stream : nullptr; }

  explicit AuditFile(const std::string& path) {
    if (path.empty()) return;
    stream.open(path);
    if (!stream) {
      throw ConfigError("cannot open audit file '" + path + "'");
    }
  }
};

EnsembleResult run_point(const ExperimentConfig& cfg, int L, double J,
                         double t_a, SteeringKind kind, bool compute_levels,
                         std::ostream* audit) {
  EnsembleSpec spec;
  spec.n_spins = L;
  spec.coupling = J;
  spec.disorder_width = cfg.disorder_width;
  spec.transverse_field = cfg.transverse_field;
  spec.boundary = cfg.boundary;
  spec.n_realizations = cfg.n_realizations;
  spec.master_seed = cfg.master_seed;
  spec.t_a = t_a;
  spec.mode = cfg.steering_mode(kind);
  spec.schedule = cfg.schedule();
  spec.compute_levels = compute_levels;

  if (audit) {
    *audit << "{\"point\":{\"L\":" << L << ",\"J\":" << format_double(J)
           << ",\"t_a\":" << format_double(t_a) << ",\"mode\":\""
           << to_string(kind) << "\"}}\n";
  }
  EnsembleOptions opts;
  opts.jobs = cfg.jobs;
  opts.audit = audit;
  const EnsembleResult result = run_ensemble(spec, cfg.integrator, opts);
  std::cerr << "[qaa] L=" << L << " J=" << format_double(J)
            << " t_a=" << format_double(t_a) << " mode=" << to_string(kind)
            << " mean_P1=" << format_double(result.mean_P1) << " ("
            << result.n_realizations << " realizations)\n";
  return result;
}

void apply_quick(ExperimentConfig& cfg, bool shrink_L) {
  if (!cfg.quick) return;
  cfg.n_realizations = std::min(cfg.n_realizations, 200);
  if (shrink_L) cfg.L_list = {8};
}

double bernoulli_stderr(double p, int n) {
  if (n < 2) return 0.0;
  return std::sqrt(p * (1.0 - p) / (n - 1));
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
  std::vector<std::string> mode_names;
  mode_names.reserve(modes.size());
  for (SteeringKind k : modes) mode_names.push_back(to_string(k));

  nlohmann::json model{{"L", L_list},
                       {"J", J_list},
                       {"W", disorder_width},
                       {"h0", transverse_field},
                       {"boundary", boundary_name(boundary)}};
  nlohmann::json protocol{{"t_a", ta_list},
                          {"steering", mode_names},
                          {"schedule", schedule_name}};
  if (cap) protocol["cap"] = *cap;
  nlohmann::json ensemble{{"n_realizations", n_realizations},
                          {"master_seed", master_seed}};
  nlohmann::json integrator_block{{"rtol", integrator.rtol},
                                  {"atol", integrator.atol},
                                  {"max_step", integrator.max_step},
                                  {"min_step", integrator.min_step},
                                  {"norm_drift_tol", integrator.norm_drift_tol}};
  nlohmann::json output{{"path", out_path},
                        {"audit", audit_path},
                        {"jobs", jobs},
                        {"quick", quick},
                        {"panel", panel}};
  return nlohmann::json{{"model", model},
                        {"protocol", protocol},
                        {"ensemble", ensemble},
                        {"integrator", integrator_block},
                        {"output", output}};
}

void ExperimentConfig::apply_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config document must be a JSON object");
  }
  require_keys(doc, "<root>",
               {"model", "protocol", "ensemble", "integrator", "output"});
  if (doc.contains("model")) {
    const auto& m = doc.at("model");
    require_keys(m, "model", {"L", "J", "W", "h0", "boundary"});
    if (m.contains("L")) {
      L_list = list_or_scalar<int>(m.at("L"), "model.L", [](const auto& v) {
        return v.template get<int>();
      });
    }
    if (m.contains("J")) {
      J_list = list_or_scalar<double>(m.at("J"), "model.J", [](const auto& v) {
        return v.template get<double>();
      });
    }
    if (m.contains("W")) disorder_width = m.at("W").template get<double>();
    if (m.contains("h0")) transverse_field = m.at("h0").template get<double>();
    if (m.contains("boundary")) {
      boundary = parse_boundary(m.at("boundary").template get<std::string>());
    }
  }
  if (doc.contains("protocol")) {
    const auto& p = doc.at("protocol");
    require_keys(p, "protocol", {"t_a", "steering", "schedule", "cap"});
    if (p.contains("t_a")) {
      ta_list = list_or_scalar<double>(
          p.at("t_a"), "protocol.t_a",
          [](const auto& v) { return v.template get<double>(); });
    }
    if (p.contains("steering")) {
      const auto names = list_or_scalar<std::string>(
          p.at("steering"), "protocol.steering",
          [](const auto& v) { return v.template get<std::string>(); });
      modes.clear();
      for (const std::string& name : names) modes.push_back(parse_steering(name));
    }
    if (p.contains("schedule")) {
      schedule_name = p.at("schedule").template get<std::string>();
      parse_schedule(schedule_name);  // validate eagerly
    }
    if (p.contains("cap")) cap = p.at("cap").template get<double>();
  }
  if (doc.contains("ensemble")) {
    const auto& e = doc.at("ensemble");
    require_keys(e, "ensemble", {"n_realizations", "master_seed"});
    if (e.contains("n_realizations")) {
      n_realizations = e.at("n_realizations").template get<int>();
    }
    if (e.contains("master_seed")) {
      master_seed = e.at("master_seed").template get<std::uint64_t>();
    }
  }
  if (doc.contains("integrator")) {
    const auto& i = doc.at("integrator");
    require_keys(i, "integrator",
                 {"rtol", "atol", "max_step", "min_step", "norm_drift_tol"});
    if (i.contains("rtol")) integrator.rtol = i.at("rtol").template get<double>();
    if (i.contains("atol")) integrator.atol = i.at("atol").template get<double>();
    if (i.contains("max_step")) {
      integrator.max_step = i.at("max_step").template get<double>();
    }
    if (i.contains("min_step")) {
      integrator.min_step = i.at("min_step").template get<double>();
    }
    if (i.contains("norm_drift_tol")) {
      integrator.norm_drift_tol = i.at("norm_drift_tol").template get<double>();
    }
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    require_keys(o, "output", {"path", "audit", "jobs", "quick", "panel"});
    if (o.contains("path")) out_path = o.at("path").template get<std::string>();
    if (o.contains("audit")) {
      audit_path = o.at("audit").template get<std::string>();
    }
    if (o.contains("jobs")) jobs = o.at("jobs").template get<int>();
    if (o.contains("quick")) quick = o.at("quick").template get<bool>();
    if (o.contains("panel")) panel = o.at("panel").template get<std::string>();
  }
  integrator.validate();
}

void ExperimentConfig::apply_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  apply_json(doc);
}

ExperimentConfig default_config_fig1() {
  ExperimentConfig cfg;
  cfg.L_list = {1, 3};
  cfg.J_list = {0.1};
  cfg.boundary = Boundary::OpenChain;  // 1- and 3-spin systems
  cfg.ta_list = log_spaced(0.1, 100.0, 13);
  cfg.modes = {SteeringKind::None, SteeringKind::SingleSpin,
               SteeringKind::Exact};
  return cfg;
}

ExperimentConfig default_config_fig2() {
  ExperimentConfig cfg;
  cfg.L_list = {8, 10, 12};
  cfg.J_list = log_spaced(0.01, 10.0, 13);
  cfg.ta_list = log_spaced(0.1, 100.0, 13);
  cfg.modes = {SteeringKind::None, SteeringKind::SingleSpin};
  return cfg;
}

ExperimentConfig default_config_fig3() {
  ExperimentConfig cfg;
  cfg.L_list = {8, 10, 12};
  cfg.J_list = {0.3};
  cfg.ta_list = {1.0};
  cfg.modes = {SteeringKind::None, SteeringKind::SingleSpin};
  return cfg;
}

ExperimentConfig default_config_grid() {
  ExperimentConfig cfg;
  cfg.L_list = {12};
  cfg.J_list = log_spaced(0.01, 10.0, 7);
  cfg.ta_list = log_spaced(0.1, 1000.0, 5);
  cfg.modes = {SteeringKind::None, SteeringKind::SingleSpin};
  return cfg;
}

ExperimentConfig default_config_cluster() {
  ExperimentConfig cfg;
  cfg.L_list = {12};
  cfg.J_list = {0.05, 0.1, 0.2, 0.3, 0.5, 1.0};
  cfg.ta_list = {128.0};
  cfg.modes = {SteeringKind::None, SteeringKind::SingleSpin,
               SteeringKind::Cluster};
  return cfg;
}

ExperimentConfig default_config_run() {
  ExperimentConfig cfg;
  cfg.L_list = {8};
  cfg.J_list = {0.1};
  cfg.ta_list = {1.0};
  cfg.modes = {SteeringKind::SingleSpin};
  cfg.n_realizations = 100;
  return cfg;
}

void cmd_fig1(const ExperimentConfig& cfg_in, std::ostream& out) {
  ExperimentConfig cfg = cfg_in;
  apply_quick(cfg, false);
  AuditFile audit(cfg.audit_path);
  write_header(out, "fig1", cfg);
  out << "t_a,mode,L,J,mean_P1,stderr_P1,n_realizations\n";
  for (int L : cfg.L_list) {
    const double J = cfg.J_list.front();
    for (SteeringKind kind : cfg.modes) {
      for (double t_a : cfg.ta_list) {
        const EnsembleResult r =
            run_point(cfg, L, J, t_a, kind, false, audit.get());
        out << format_double(t_a) << ',' << to_string(kind) << ',' << L << ','
            << format_double(J) << ',' << format_double(r.mean_P1) << ','
            << format_double(r.stderr_P1) << ',' << r.n_realizations << '\n';
      }
    }
  }
}

void cmd_fig2(const ExperimentConfig& cfg_in, std::ostream& out) {
  ExperimentConfig cfg = cfg_in;
  apply_quick(cfg, false);
  if (cfg.panel != "a" && cfg.panel != "b" && cfg.panel != "c" &&
      cfg.panel != "all") {
    throw ConfigError("panel must be one of a|b|c|all");
  }
  AuditFile audit(cfg.audit_path);
  write_header(out, "fig2", cfg);
  out << "panel,L,J,t_a,mode,mean_P1,stderr_P1,mean_naive_success,"
         "n_realizations\n";

  const auto emit = [&](char panel, int L, double J, double t_a,
                        SteeringKind kind) {
    const EnsembleResult r = run_point(cfg, L, J, t_a, kind, false, audit.get());
    out << panel << ',' << L << ',' << format_double(J) << ','
        << format_double(t_a) << ',' << to_string(kind) << ','
        << format_double(r.mean_P1) << ',' << format_double(r.stderr_P1) << ','
        << format_double(r.mean_naive_success) << ',' << r.n_realizations
        << '\n';
  };

  if (cfg.panel == "a" || cfg.panel == "all") {
    // The time sweep runs at one coupling; a single-element J list overrides
    // the figure's J = 0.1.
    const double J = cfg.J_list.size() == 1 ? cfg.J_list.front() : 0.1;
    for (int L : cfg.L_list) {
      for (SteeringKind kind : cfg.modes) {
        for (double t_a : cfg.ta_list) emit('a', L, J, t_a, kind);
      }
    }
  }
  if (cfg.panel == "b" || cfg.panel == "all") {
    for (int L : cfg.L_list) {
      for (SteeringKind kind : cfg.modes) {
        for (double J : cfg.J_list) emit('b', L, J, 1.0, kind);
      }
    }
  }
  if (cfg.panel == "c" || cfg.panel == "all") {
    for (int L : cfg.L_list) {
      for (SteeringKind kind : cfg.modes) {
        for (double J : cfg.J_list) emit('c', L, J, 100.0, kind);
      }
    }
  }
}

void cmd_fig3(const ExperimentConfig& cfg_in, std::ostream& out) {
  ExperimentConfig cfg = cfg_in;
  apply_quick(cfg, false);
  for (int L : cfg.L_list) {
    if (L > 14) {
      throw ConfigError("level statistics refused for L=" + std::to_string(L) +
                        " (2^L level arrays; limit 14)");
    }
  }
  AuditFile audit(cfg.audit_path);
  write_header(out, "fig3", cfg);
  out << "L,J,t_a,mode,n,mean_Pn,S_N\n";
  const double J = cfg.J_list.front();
  const double t_a = cfg.ta_list.front();

  const auto emit_rows = [&](int L, const std::string& mode_name,
                             const std::vector<double>& pn,
                             const std::vector<double>& sn) {
    for (std::size_t n = 0; n < pn.size(); ++n) {
      out << L << ',' << format_double(J) << ',' << format_double(t_a) << ','
          << mode_name << ',' << (n + 1) << ',' << format_double(pn[n]) << ','
          << format_double(sn[n]) << '\n';
    }
  };

  for (int L : cfg.L_list) {
    bool naive_done = false;
    for (SteeringKind kind : cfg.modes) {
      const EnsembleResult r = run_point(cfg, L, J, t_a, kind, true, audit.get());
      emit_rows(L, to_string(kind), *r.mean_Pn, *r.S_N);
      if (!naive_done) {
        // The baseline histogram is dynamics-free; any mode's run carries it.
        emit_rows(L, "naive", *r.mean_Pn_naive,
                  cumulative_levels(*r.mean_Pn_naive));
        naive_done = true;
      }
    }
  }
}

void cmd_grid(const ExperimentConfig& cfg_in, std::ostream& out) {
  ExperimentConfig cfg = cfg_in;
  apply_quick(cfg, true);
  AuditFile audit(cfg.audit_path);
  write_header(out, "grid", cfg);
  out << "L,J,t_a,mode,mean_infidelity,stderr_P1,single_wins,"
         "n_realizations\n";
  const int L = cfg.L_list.front();
  for (double J : cfg.J_list) {
    for (double t_a : cfg.ta_list) {
      const EnsembleResult none =
          run_point(cfg, L, J, t_a, SteeringKind::None, false, audit.get());
      const EnsembleResult single = run_point(cfg, L, J, t_a,
                                              SteeringKind::SingleSpin, false,
                                              audit.get());
      const double inf_naive = 1.0 - none.mean_naive_success;
      const double inf_none = 1.0 - none.mean_P1;
      const double inf_single = 1.0 - single.mean_P1;
      const bool single_wins = inf_single < inf_none && inf_single < inf_naive;
      const auto row = [&](const char* mode, double infid, double stderr_p1) {
        out << L << ',' << format_double(J) << ',' << format_double(t_a) << ','
            << mode << ',' << format_double(infid) << ','
            << format_double(stderr_p1) << ',' << (single_wins ? 1 : 0) << ','
            << cfg.n_realizations << '\n';
      };
      row("naive", inf_naive,
          bernoulli_stderr(none.mean_naive_success, none.n_realizations));
      row("none", inf_none, none.stderr_P1);
      row("single", inf_single, single.stderr_P1);
    }
  }
}

void cmd_cluster(const ExperimentConfig& cfg_in, std::ostream& out) {
  ExperimentConfig cfg = cfg_in;
  apply_quick(cfg, true);
  AuditFile audit(cfg.audit_path);
  write_header(out, "cluster", cfg);
  out << "L,J,t_a,mode,mean_P1,stderr_P1,mean_naive_success,n_realizations\n";
  const double t_a = cfg.ta_list.front();
  for (int L : cfg.L_list) {
    for (double J : cfg.J_list) {
      for (SteeringKind kind : cfg.modes) {
        const EnsembleResult r = run_point(cfg, L, J, t_a, kind, false,
                                           audit.get());
        out << L << ',' << format_double(J) << ',' << format_double(t_a) << ','
            << to_string(kind) << ',' << format_double(r.mean_P1) << ','
            << format_double(r.stderr_P1) << ','
            << format_double(r.mean_naive_success) << ',' << r.n_realizations
            << '\n';
      }
    }
  }
}

void cmd_run(const ExperimentConfig& cfg_in, std::ostream& out) {
  ExperimentConfig cfg = cfg_in;
  apply_quick(cfg, false);
  AuditFile audit(cfg.audit_path);
  write_header(out, "run", cfg);
  out << "L,J,t_a,mode,mean_P1,stderr_P1,min_P1,mean_naive_success,"
         "n_realizations\n";
  for (int L : cfg.L_list) {
    for (double J : cfg.J_list) {
      for (double t_a : cfg.ta_list) {
        for (SteeringKind kind : cfg.modes) {
          const EnsembleResult r = run_point(cfg, L, J, t_a, kind, false,
                                             audit.get());
          out << L << ',' << format_double(J) << ',' << format_double(t_a)
              << ',' << to_string(kind) << ',' << format_double(r.mean_P1)
              << ',' << format_double(r.stderr_P1) << ','
              << format_double(r.min_P1) << ','
              << format_double(r.mean_naive_success) << ','
              << r.n_realizations << '\n';
        }
      }
    }
  }
}

}  // namespace qaa
