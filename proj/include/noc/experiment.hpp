#pragma once

#include <map>
#include <string>

#include "noc/lq_analytic.hpp"
#include "noc/riccati_flow.hpp"

namespace noc {

// Built-in experiment presets.
//   a: track a slow sine, no input, relu mu, plain GD.
//   b: predict the sign of a sine input, tanh mu, Adam.
//   c: classify alternating wave shapes of the input, tanh mu, Adam.
SimConfig case_config(char case_id);

struct Metrics {
  double final_avg_lagrangian = 0.0;
  double avg_lagrangian_at_10pct = 0.0;
  double rms_first = 0.0;
  double rms_last = 0.0;
  bool diverged = false;
  double wall_time_s = 0.0;
};

// Runs cfg and writes, under out_dir:
//   trace.csv, metrics.json, response.svg, avg_lagrangian.svg,
//   config.resolved, theta_final.csv
// rms_window_s <= 0 means 10% of the horizon. Returns 0, or 2 on divergence
// (partial trace and metrics are still written).
int run_experiment(const SimConfig& cfg, const std::string& out_dir,
                   double rms_window_s = 0.0, Metrics* out_metrics = nullptr);

// Time-reversed Riccati flow against its closed form; writes a CSV with
// columns s,theta_numeric,theta_closed_form,asymptote and returns the
// max pointwise |numeric - closed_form|.
double run_lq_experiment(const LQParams& params, double theta0, double tau,
                         int n_steps, const std::string& csv_path);

// key = value run files; '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
void apply_kv(SimConfig& cfg, const std::map<std::string, std::string>& kv);
std::string config_to_kv(const SimConfig& cfg);

}  // namespace noc
