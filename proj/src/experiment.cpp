#include "noc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "noc/analytics.hpp"
#include "noc/errors.hpp"
#include "noc/svg.hpp"
#include "noc/trace_io.hpp"

namespace fs = std::filesystem;

namespace noc {

namespace {

std::string signal_kind_name(SignalKind kind) {
  switch (kind) {
    case SignalKind::None: return "none";
    case SignalKind::Sine: return "sine";
    case SignalKind::SignOfSine: return "sign_of_sine";
    case SignalKind::PiecewiseWaves: return "piecewise_waves";
  }
  return "none";
}

SignalKind parse_signal_kind(const std::string& name) {
  if (name == "none") return SignalKind::None;
  if (name == "sine") return SignalKind::Sine;
  if (name == "sign_of_sine") return SignalKind::SignOfSine;
  if (name == "piecewise_waves") return SignalKind::PiecewiseWaves;
  throw ConfigError("unknown signal kind '" + name + "'");
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError("cannot parse bool '" + v + "'");
}

Metrics compute_metrics(const std::vector<TraceRecord>& trace,
                        const SimConfig& cfg, double rms_window_s) {
  Metrics m;
  if (trace.empty()) {
    m.final_avg_lagrangian = std::nan("");
    m.avg_lagrangian_at_10pct = std::nan("");
    m.rms_first = m.rms_last = std::nan("");
    return m;
  }
  const auto avg = average_lagrangian(trace, cfg.tau, cfg.t0);
  m.final_avg_lagrangian = avg.back().second;
  const std::size_t at10 =
      std::max<std::size_t>(1, trace.size() / 10) - 1;  // j = ceil(N/10)
  m.avg_lagrangian_at_10pct = avg[std::min(at10, avg.size() - 1)].second;
  const double window =
      rms_window_s > 0.0 ? rms_window_s : 0.1 * cfg.horizon();
  const TrackingRms rms = tracking_error(trace, window);
  m.rms_first = rms.first;
  m.rms_last = rms.last;
  return m;
}

void write_metrics_json(const std::string& path, const Metrics& m) {
  nlohmann::json j;
  j["final_avg_lagrangian"] = m.final_avg_lagrangian;
  j["avg_lagrangian_at_10pct"] = m.avg_lagrangian_at_10pct;
  j["rms_first"] = m.rms_first;
  j["rms_last"] = m.rms_last;
  j["diverged"] = m.diverged;
  j["wall_time_s"] = m.wall_time_s;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

void write_plots(const std::string& out_dir,
                 const std::vector<TraceRecord>& trace, const SimConfig& cfg) {
  if (trace.empty()) return;
  PlotSeries target{"target z", "#222222", {}, {}};
  PlotSeries response{"response", "#2ca02c", {}, {}};
  PlotSeries input{"input u", "#1f77b4", {}, {}};
  const bool has_input = trace.front().u.size() > 0;
  for (const TraceRecord& rec : trace) {
    target.x.push_back(rec.t);
    target.y.push_back(rec.z);
    response.x.push_back(rec.t);
    response.y.push_back(rec.pi_x);
    if (has_input) {
      input.x.push_back(rec.t);
      input.y.push_back(rec.u[0]);
    }
  }
  std::vector<PlotSeries> series{target, response};
  if (has_input) series.push_back(input);
  write_svg_plot(out_dir + "/response.svg", "network response vs target",
                 series);

  PlotSeries avg{"running mean of l", "#d62728", {}, {}};
  for (const auto& [s, v] : average_lagrangian(trace, cfg.tau, cfg.t0)) {
    avg.x.push_back(s);
    avg.y.push_back(v);
  }
  write_svg_plot(out_dir + "/avg_lagrangian.svg", "average Lagrangian", {avg});
}

}  // namespace

SimConfig case_config(char case_id) {
  SimConfig cfg;
  cfg.tau = 0.5;
  cfg.n_iter = 100;
  cfg.num_neurons = 2;
  // The flow is only conditionally stable at tau = 0.5; these structural
  // choices and init scales sit in the basin where the tracking runs settle
  // (self-excitation through recurrent self loops and large initial weights
  // both push the transient costate past the inner loop's stable range).
  cfg.self_loops = false;
  cfg.activation = Activation::Tanh;
  cfg.leak_scale = 0.5;
  cfg.gamma_init_scale = 0.005;
  cfg.mu_hidden = 20;
  cfg.mu_init_gain = 2.0;
  cfg.lagrangian.r1 = 1e3;
  cfg.lagrangian.regularize_params = true;
  cfg.t0 = 0.0;

  switch (case_id) {
    case 'a':
      cfg.n_T = 10000;
      cfg.lagrangian.q = 1e4;
      cfg.lagrangian.r2 = 1e5;
      cfg.lambda = 1e-5;
      cfg.epsilon = 1e3;
      cfg.optimizer = Optimizer::PlainGd;
      cfg.mu_activation = Activation::Relu;
      cfg.mu_feed_input = false;
      cfg.signal.kind = SignalKind::Sine;
      cfg.signal.frequency = 0.001;
      cfg.seed = 14;
      break;
    case 'b':
      cfg.n_T = 15000;
      cfg.lagrangian.q = 1e5;
      cfg.lagrangian.r2 = 1e2;
      cfg.lambda = 1e-3;
      cfg.epsilon = 1e4;
      cfg.optimizer = Optimizer::Adam;
      cfg.mu_activation = Activation::Tanh;
      cfg.mu_feed_input = true;
      cfg.signal.kind = SignalKind::SignOfSine;
      cfg.signal.frequency = 0.002;
      cfg.seed = 15;
      break;
    case 'c':
      cfg.n_T = 20000;
      cfg.lagrangian.q = 1e5;
      cfg.lagrangian.r2 = 1e2;
      cfg.lambda = 1e-3;
      cfg.epsilon = 1e4;
      cfg.optimizer = Optimizer::Adam;
      cfg.mu_activation = Activation::Tanh;
      cfg.mu_feed_input = true;
      cfg.signal.kind = SignalKind::PiecewiseWaves;
      cfg.signal.frequency = 0.002;
      cfg.signal.psi = 2000.0;
      cfg.seed = 12;
      break;
    default:
      throw ConfigError(std::string("unknown experiment case '") + case_id +
                        "'");
  }
  return cfg;
}

int run_experiment(const SimConfig& cfg, const std::string& out_dir,
                   double rms_window_s, Metrics* out_metrics) {
  cfg.validate();
  fs::create_directories(out_dir);
  {
    std::ofstream echo(out_dir + "/config.resolved");
    if (!echo) throw ConfigError("cannot write config echo");
    echo << config_to_kv(cfg);
  }

  std::vector<TraceRecord> trace;
  trace.reserve(cfg.n_T);
  Metrics metrics;
  const auto t_start = std::chrono::steady_clock::now();
  long diverged_step = -1;
  SimResult sim;
  try {
    sim = run_simulation(cfg, [&](const TraceRecord& rec) {
      trace.push_back(rec);
    });
  } catch (const DivergenceError& e) {
    metrics.diverged = true;
    diverged_step = e.step;
    std::cerr << "diverged at step " << e.step << ": " << e.what() << "\n";
  }
  metrics.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  write_trace_csv(out_dir + "/trace.csv", trace);
  const Metrics computed = compute_metrics(trace, cfg, rms_window_s);
  metrics.final_avg_lagrangian = computed.final_avg_lagrangian;
  metrics.avg_lagrangian_at_10pct = computed.avg_lagrangian_at_10pct;
  metrics.rms_first = computed.rms_first;
  metrics.rms_last = computed.rms_last;
  write_metrics_json(out_dir + "/metrics.json", metrics);
  write_plots(out_dir, trace, cfg);
  if (!metrics.diverged) save_theta_csv(out_dir + "/theta_final.csv", sim.net);

  if (out_metrics) *out_metrics = metrics;
  return diverged_step >= 0 ? 2 : 0;
}

double run_lq_experiment(const LQParams& params, double theta0, double tau,
                         int n_steps, const std::string& csv_path) {
  const LQBridgeResult flow = lq_forward_flow_bridge(params, theta0, tau, n_steps);
  const double limit = lq_asymptote(params);

  std::ofstream out(csv_path);
  if (!out) throw ConfigError("cannot open '" + csv_path + "' for writing");
  out << "s,theta_numeric,theta_closed_form,asymptote\n";
  double max_err = 0.0;
  for (std::size_t k = 0; k < flow.theta.size(); ++k) {
    const double s = double(k) * tau;
    const double closed = lq_closed_form(s, params);
    max_err = std::max(max_err, std::abs(flow.theta[k] - closed));
    out << format_double(s) << ',' << format_double(flow.theta[k]) << ','
        << format_double(closed) << ',' << format_double(limit) << "\n";
  }
  return max_err;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ": empty key");
    kv[key] = value;
  }
  return kv;
}

void apply_kv(SimConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "tau") cfg.tau = std::stod(value);
    else if (key == "n_T") cfg.n_T = std::stoi(value);
    else if (key == "n_iter") cfg.n_iter = std::stoi(value);
    else if (key == "lambda") cfg.lambda = std::stod(value);
    else if (key == "epsilon") cfg.epsilon = std::stod(value);
    else if (key == "optimizer") {
      if (value == "gd") cfg.optimizer = Optimizer::PlainGd;
      else if (value == "adam") cfg.optimizer = Optimizer::Adam;
      else throw ConfigError("unknown optimizer '" + value + "'");
    } else if (key == "q") cfg.lagrangian.q = std::stod(value);
    else if (key == "r1") cfg.lagrangian.r1 = std::stod(value);
    else if (key == "r2") cfg.lagrangian.r2 = std::stod(value);
    else if (key == "regularize_params")
      cfg.lagrangian.regularize_params = parse_bool(value);
    else if (key == "num_neurons") cfg.num_neurons = std::stoi(value);
    else if (key == "self_loops") cfg.self_loops = parse_bool(value);
    else if (key == "activation") cfg.activation = parse_activation(value);
    else if (key == "leak_scale") cfg.leak_scale = std::stod(value);
    else if (key == "gamma_init_scale") cfg.gamma_init_scale = std::stod(value);
    else if (key == "mu_hidden") cfg.mu_hidden = std::stoi(value);
    else if (key == "mu_activation") cfg.mu_activation = parse_activation(value);
    else if (key == "mu_feed_input") cfg.mu_feed_input = parse_bool(value);
    else if (key == "mu_init_gain") cfg.mu_init_gain = std::stod(value);
    else if (key == "mu_uniform_bias_init")
      cfg.mu_uniform_bias_init = parse_bool(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "t0") cfg.t0 = std::stod(value);
    else if (key == "signal_kind") cfg.signal.kind = parse_signal_kind(value);
    else if (key == "frequency") cfg.signal.frequency = std::stod(value);
    else if (key == "amplitude") cfg.signal.amplitude = std::stod(value);
    else if (key == "psi") cfg.signal.psi = std::stod(value);
    else if (key == "min_segment_periods")
      cfg.signal.min_segment_periods = std::stod(value);
    else if (key == "max_segment_periods")
      cfg.signal.max_segment_periods = std::stod(value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

std::string config_to_kv(const SimConfig& cfg) {
  std::ostringstream out;
  out << "tau = " << format_double(cfg.tau) << "\n"
      << "n_T = " << cfg.n_T << "\n"
      << "n_iter = " << cfg.n_iter << "\n"
      << "lambda = " << format_double(cfg.lambda) << "\n"
      << "epsilon = " << format_double(cfg.epsilon) << "\n"
      << "optimizer = "
      << (cfg.optimizer == Optimizer::PlainGd ? "gd" : "adam") << "\n"
      << "q = " << format_double(cfg.lagrangian.q) << "\n"
      << "r1 = " << format_double(cfg.lagrangian.r1) << "\n"
      << "r2 = " << format_double(cfg.lagrangian.r2) << "\n"
      << "regularize_params = " << (cfg.lagrangian.regularize_params ? 1 : 0)
      << "\n"
      << "num_neurons = " << cfg.num_neurons << "\n"
      << "self_loops = " << (cfg.self_loops ? 1 : 0) << "\n"
      << "activation = " << activation_name(cfg.activation) << "\n"
      << "leak_scale = " << format_double(cfg.leak_scale) << "\n"
      << "gamma_init_scale = " << format_double(cfg.gamma_init_scale) << "\n"
      << "mu_hidden = " << cfg.mu_hidden << "\n"
      << "mu_activation = " << activation_name(cfg.mu_activation) << "\n"
      << "mu_feed_input = " << (cfg.mu_feed_input ? 1 : 0) << "\n"
      << "mu_init_gain = " << format_double(cfg.mu_init_gain) << "\n"
      << "mu_uniform_bias_init = " << (cfg.mu_uniform_bias_init ? 1 : 0) << "\n"
      << "seed = " << cfg.seed << "\n"
      << "t0 = " << format_double(cfg.t0) << "\n"
      << "signal_kind = " << signal_kind_name(cfg.signal.kind) << "\n"
      << "frequency = " << format_double(cfg.signal.frequency) << "\n"
      << "amplitude = " << format_double(cfg.signal.amplitude) << "\n"
      << "psi = " << format_double(cfg.signal.psi) << "\n"
      << "min_segment_periods = " << format_double(cfg.signal.min_segment_periods)
      << "\n"
      << "max_segment_periods = " << format_double(cfg.signal.max_segment_periods)
      << "\n";
  return out.str();
}

}  // namespace noc
