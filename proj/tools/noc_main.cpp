#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "noc/errors.hpp"
#include "noc/experiment.hpp"
#include "noc/selfcheck.hpp"

namespace {

int cmd_run(const std::string& case_id, const std::string& config_file,
            const std::string& out_dir, const std::map<std::string, std::string>& flags) {
  if (case_id == "lq") {
    noc::LQParams params;
    double tau = 0.01, theta0 = 0.0;
    int steps = 3000;
    if (auto it = flags.find("A"); it != flags.end()) params.A = std::stod(it->second);
    if (auto it = flags.find("B"); it != flags.end()) params.B = std::stod(it->second);
    if (auto it = flags.find("Q"); it != flags.end()) params.Q = std::stod(it->second);
    if (auto it = flags.find("R"); it != flags.end()) params.R = std::stod(it->second);
    const std::string path = out_dir + "/lq.csv";
    std::filesystem::create_directories(out_dir);
    const double max_err = noc::run_lq_experiment(params, theta0, tau, steps, path);
    std::cout << "wrote " << path << "\n"
              << "max |numeric - closed_form| = " << max_err << "\n"
              << "asymptote = " << noc::lq_asymptote(params) << "\n";
    return 0;
  }

  if (case_id.size() != 1 || (case_id[0] != 'a' && case_id[0] != 'b' && case_id[0] != 'c'))
    throw noc::ConfigError("case must be one of a, b, c, lq");

  noc::SimConfig cfg = noc::case_config(case_id[0]);
  if (!config_file.empty()) noc::apply_kv(cfg, noc::parse_kv_file(config_file));
  double rms_window = 0.0;
  {
    std::map<std::string, std::string> overrides = flags;
    if (auto it = overrides.find("rms_window"); it != overrides.end()) {
      rms_window = std::stod(it->second);
      overrides.erase(it);
    }
    noc::apply_kv(cfg, overrides);
  }

  noc::Metrics metrics;
  const int rc = noc::run_experiment(cfg, out_dir, rms_window, &metrics);
  std::cout << "case " << case_id << ": " << (rc == 0 ? "completed" : "DIVERGED")
            << " in " << metrics.wall_time_s << " s\n"
            << "  avg Lagrangian @10% = " << metrics.avg_lagrangian_at_10pct
            << ", final = " << metrics.final_avg_lagrangian << "\n"
            << "  tracking RMS first/last = " << metrics.rms_first << " / "
            << metrics.rms_last << "\n"
            << "  outputs in " << out_dir << "\n";
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forward-in-time neural optimal control runner"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a tracking experiment (a, b, c) or lq");
  std::string case_id, config_file, out_dir = "out";
  run->add_option("case", case_id, "experiment id: a, b, c or lq")->required();
  run->add_option("--config", config_file, "key = value run file");
  run->add_option("--out", out_dir, "output directory");
  std::map<std::string, std::string> flags;
  auto add_flag = [&](const char* cli, const char* key, const char* help) {
    run->add_option_function<std::string>(
        cli, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  add_flag("--seed", "seed", "master seed");
  add_flag("--n-T", "n_T", "number of time steps");
  add_flag("--tau", "tau", "Euler step (s)");
  add_flag("--n-iter", "n_iter", "inner descent iterations");
  add_flag("--lambda", "lambda", "inner learning rate");
  add_flag("--epsilon", "epsilon", "Omega_t regularization weight");
  add_flag("--q", "q", "tracking weight");
  add_flag("--r1", "r1", "state regularization weight");
  add_flag("--r2", "r2", "control regularization weight");
  add_flag("--optimizer", "optimizer", "gd or adam");
  add_flag("--regularize-params", "regularize_params", "r1 covers parameters too (0/1)");
  add_flag("--mu-hidden", "mu_hidden", "hidden width of the costate net");
  add_flag("--frequency", "frequency", "signal frequency (Hz)");
  add_flag("--amplitude", "amplitude", "signal amplitude");
  add_flag("--psi", "psi", "input ramp time constant");
  add_flag("--rms-window", "rms_window", "tracking RMS window (s)");
  add_flag("--A", "A", "LQ drift (lq case only)");
  add_flag("--B", "B", "LQ control gain (lq case only)");
  add_flag("--Q", "Q", "LQ state weight (lq case only)");
  add_flag("--R", "R", "LQ control weight (lq case only)");

  // lq
  auto* lq = app.add_subcommand("lq", "time-reversed Riccati flow vs closed form");
  noc::LQParams lq_params;
  double lq_tau = 0.01, lq_theta0 = 0.0;
  int lq_steps = 3000;
  std::string lq_out = "lq.csv";
  lq->add_option("--A", lq_params.A, "drift coefficient");
  lq->add_option("--B", lq_params.B, "control gain");
  lq->add_option("--Q", lq_params.Q, "state weight (> 0)");
  lq->add_option("--R", lq_params.R, "control weight (> 0)");
  lq->add_option("--tau", lq_tau, "Euler step");
  lq->add_option("--steps", lq_steps, "number of steps");
  lq->add_option("--theta0", lq_theta0, "initial theta");
  lq->add_option("--out", lq_out, "output CSV path");

  // check
  auto* check = app.add_subcommand("check", "run the oracle/invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(case_id, config_file, out_dir, flags);
    if (lq->parsed()) {
      const double max_err =
          noc::run_lq_experiment(lq_params, lq_theta0, lq_tau, lq_steps, lq_out);
      std::cout << "wrote " << lq_out << "\n"
                << "max |numeric - closed_form| = " << max_err << "\n"
                << "asymptote = " << noc::lq_asymptote(lq_params) << "\n";
      return 0;
    }
    if (check->parsed()) return noc::run_self_checks(std::cout) == 0 ? 0 : 1;
  } catch (const noc::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
