#include "noc/riccati_flow.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "noc/errors.hpp"
#include "noc/rng.hpp"

namespace noc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("riccati_flow: ") + what);
}

void check_omega_dims(const Eigen::MatrixXd& jac_x,
                      const Eigen::MatrixXd& jac_theta,
                      const Eigen::VectorXd& x_dot,
                      const Eigen::VectorXd& h_x) {
  require(jac_x.cols() == x_dot.size(), "jac_x / x_dot mismatch");
  require(jac_x.rows() == h_x.size(), "jac_x / h_x mismatch");
  require(jac_theta.rows() == h_x.size(), "jac_theta / h_x mismatch");
}

Eigen::VectorXd omega_residual(const Eigen::VectorXd& phi,
                               const Eigen::MatrixXd& jac_x,
                               const Eigen::MatrixXd& jac_theta,
                               const Eigen::VectorXd& x_dot,
                               const Eigen::VectorXd& h_x) {
  return jac_x * x_dot + jac_theta * phi + h_x;
}

}  // namespace

void SimConfig::validate() const {
  if (tau <= 0.0) throw ConfigError("tau must be > 0");
  if (n_T < 1) throw ConfigError("n_T must be >= 1");
  if (n_iter < 1) throw ConfigError("n_iter must be >= 1");
  if (epsilon < 0.0) throw ConfigError("epsilon must be >= 0");
  if (lambda <= 0.0) throw ConfigError("lambda must be > 0");
  if (num_neurons < 1) throw ConfigError("num_neurons must be >= 1");
  if (mu_hidden < 1) throw ConfigError("mu_hidden must be >= 1");
  if (gamma_init_scale < 0.0) throw ConfigError("gamma_init_scale must be >= 0");
  lagrangian.validate();
  if (mu_feed_input && signal_input_dim(signal.kind) == 0)
    throw ConfigError("mu_feed_input needs a signal with an input channel");
}

NetworkGraph SimConfig::make_graph() const {
  return NetworkGraph::fully_connected(num_neurons,
                                       signal_input_dim(signal.kind),
                                       self_loops);
}

double omega_loss(const Eigen::VectorXd& phi, const Eigen::MatrixXd& jac_x,
                  const Eigen::MatrixXd& jac_theta, const Eigen::VectorXd& x_dot,
                  const Eigen::VectorXd& h_x, double eps) {
  check_omega_dims(jac_x, jac_theta, x_dot, h_x);
  require(jac_theta.cols() == phi.size(), "jac_theta / phi mismatch");
  const Eigen::VectorXd r = omega_residual(phi, jac_x, jac_theta, x_dot, h_x);
  return 0.5 * r.squaredNorm() + 0.5 * eps * phi.squaredNorm();
}

Eigen::VectorXd omega_gradient(const Eigen::VectorXd& phi,
                               const Eigen::MatrixXd& jac_x,
                               const Eigen::MatrixXd& jac_theta,
                               const Eigen::VectorXd& x_dot,
                               const Eigen::VectorXd& h_x, double eps) {
  check_omega_dims(jac_x, jac_theta, x_dot, h_x);
  require(jac_theta.cols() == phi.size(), "jac_theta / phi mismatch");
  const Eigen::VectorXd r = omega_residual(phi, jac_x, jac_theta, x_dot, h_x);
  return jac_theta.transpose() * r + eps * phi;
}

Eigen::VectorXd omega_closed_form_min(const Eigen::MatrixXd& jac_x,
                                      const Eigen::MatrixXd& jac_theta,
                                      const Eigen::VectorXd& x_dot,
                                      const Eigen::VectorXd& h_x, double eps) {
  check_omega_dims(jac_x, jac_theta, x_dot, h_x);
  const Eigen::VectorXd base = jac_x * x_dot + h_x;
  Eigen::MatrixXd normal = jac_theta.transpose() * jac_theta;
  normal.diagonal().array() += eps;
  const Eigen::VectorXd rhs = -jac_theta.transpose() * base;

  if (eps == 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
    if (!lu.isInvertible())
      throw NumericalRankError("normal equations singular with eps = 0");
    return lu.solve(rhs);
  }
  return normal.ldlt().solve(rhs);
}

Eigen::VectorXd inner_descent(const Eigen::VectorXd& phi0,
                              const Eigen::MatrixXd& jac_x,
                              const Eigen::MatrixXd& jac_theta,
                              const Eigen::VectorXd& x_dot,
                              const Eigen::VectorXd& h_x, double eps,
                              int n_iter, double lambda, Optimizer opt,
                              std::vector<double>* loss_history) {
  require(n_iter >= 1, "n_iter must be >= 1");
  check_omega_dims(jac_x, jac_theta, x_dot, h_x);
  require(jac_theta.cols() == phi0.size(), "jac_theta / phi mismatch");

  const Eigen::VectorXd base = jac_x * x_dot + h_x;
  Eigen::VectorXd phi = phi0;

  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  Eigen::VectorXd m1, m2;
  if (opt == Optimizer::Adam) {
    m1 = Eigen::VectorXd::Zero(phi.size());
    m2 = Eigen::VectorXd::Zero(phi.size());
  }

  for (int it = 0; it < n_iter; ++it) {
    const Eigen::VectorXd r = jac_theta * phi + base;
    const Eigen::VectorXd grad = jac_theta.transpose() * r + eps * phi;
    if (opt == Optimizer::PlainGd) {
      phi -= lambda * grad;
    } else {
      m1 = beta1 * m1 + (1.0 - beta1) * grad;
      m2 = (beta2 * m2.array() + (1.0 - beta2) * grad.array().square()).matrix();
      const double bc1 = 1.0 - std::pow(beta1, it + 1);
      const double bc2 = 1.0 - std::pow(beta2, it + 1);
      phi -= (lambda * (m1.array() / bc1) /
              ((m2.array() / bc2).sqrt() + adam_eps))
                 .matrix();
    }
    if (!phi.allFinite())
      throw DivergenceError("inner descent produced a non-finite loss", it);
    if (loss_history)
      loss_history->push_back(omega_loss(phi, jac_x, jac_theta, x_dot, h_x, eps));
  }
  return phi;
}

Eigen::VectorXd theta_update(const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& delta_theta, double tau) {
  require(theta.size() == delta_theta.size(), "theta_update length mismatch");
  return theta - tau * delta_theta;
}

StepResult run_step(const Eigen::VectorXd& x, const CostateNet& net,
                    const Eigen::VectorXd& phi_prev, const Eigen::VectorXd& u,
                    double z, int step_index, const SimConfig& cfg,
                    const NetworkGraph& graph) {
  const StateLayout lay = graph.layout();
  const ActivationSpec act = cfg.make_activation();
  const Eigen::VectorXd u_mu = cfg.mu_feed_input ? u : Eigen::VectorXd();

  Eigen::VectorXd p = mu_forward(net, x, u_mu);
  if (!p.allFinite())
    throw DivergenceError("costate estimate is non-finite", step_index);

  Eigen::VectorXd alpha = optimal_control(p, cfg.lagrangian.r2, lay);
  Eigen::VectorXd x_dot = state_derivative(x, alpha, u, graph, act);
  if (!x_dot.allFinite())
    throw DivergenceError("state derivative is non-finite", step_index);

  const double ell =
      lagrangian(alpha, x, z, cfg.lagrangian, lay, graph.output_index());
  const double ham = p.dot(x_dot) + ell;

  const Eigen::VectorXd h_x =
      hamiltonian_grad_x(x, p, u, z, cfg.lagrangian, graph, act);
  const Eigen::MatrixXd jac_x = mu_jacobian_x(net, x, u_mu);
  const Eigen::MatrixXd jac_theta = mu_jacobian_theta(net, x, u_mu);

  Eigen::VectorXd phi;
  try {
    phi = inner_descent(phi_prev, jac_x, jac_theta, x_dot, h_x, cfg.epsilon,
                        cfg.n_iter, cfg.lambda, cfg.optimizer);
  } catch (const DivergenceError& e) {
    throw DivergenceError(std::string("inner descent diverged: ") + e.what(),
                          step_index);
  }
  const double omega_final =
      omega_loss(phi, jac_x, jac_theta, x_dot, h_x, cfg.epsilon);

  Eigen::VectorXd theta_new = theta_update(net.theta, phi, cfg.tau);
  Eigen::VectorXd x_new = euler_step(x, x_dot, cfg.tau);
  if (!theta_new.allFinite() || !x_new.allFinite() || !std::isfinite(ham) ||
      !std::isfinite(ell) || !std::isfinite(omega_final))
    throw DivergenceError("non-finite values after update", step_index);
  // A run that is still finite but many orders beyond any working regime has
  // left the model; report it as divergence instead of producing junk.
  if (x_new.cwiseAbs().maxCoeff() > 1e8 ||
      theta_new.cwiseAbs().maxCoeff() > 1e10)
    throw DivergenceError("state or estimator magnitude exploded", step_index);

  TraceRecord rec;
  rec.step = step_index;
  rec.t = cfg.t0 + step_index * cfg.tau;
  rec.x = x;
  rec.p = std::move(p);
  rec.alpha = std::move(alpha);
  rec.z = z;
  rec.u = u;
  rec.pi_x = x[graph.output_index()];
  rec.lagrangian = ell;
  rec.omega_final = omega_final;
  rec.hamiltonian = ham;

  return {std::move(x_new), std::move(theta_new), std::move(phi),
          std::move(rec)};
}

SimResult run_simulation(const SimConfig& cfg, const RecordCallback& on_record) {
  cfg.validate();
  const NetworkGraph graph = cfg.make_graph();
  const StateLayout lay = graph.layout();
  const SignalSpec signal = [&] {
    SignalSpec s = cfg.signal;
    s.schedule_seed = derive_seed(cfg.seed, 2);
    return resolve_signal(s, cfg.t0, cfg.t0 + cfg.horizon());
  }();

  // y(0) = 0; gamma parameters (w, b, k) start uniform in +-gamma_init_scale.
  SplitMix64 gamma_rng(derive_seed(cfg.seed, 0));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(lay.n());
  for (int i = lay.param_offset(); i < lay.n(); ++i)
    x[i] = gamma_rng.uniform_sym(cfg.gamma_init_scale);

  const int mu_input =
      lay.n() + (cfg.mu_feed_input ? graph.input_dim() : 0);
  CostateNet net =
      make_costate_net(mu_input, cfg.mu_hidden, cfg.mu_activation, lay.n());
  init_theta(net, derive_seed(cfg.seed, 1), cfg.mu_init_gain,
             cfg.mu_uniform_bias_init);

  Eigen::VectorXd phi = Eigen::VectorXd::Zero(net.param_count());

  SimResult result;
  result.trace.reserve(cfg.n_T);
  for (int t = 0; t < cfg.n_T; ++t) {
    const SignalSample sample = gen_signal(signal, cfg.t0 + t * cfg.tau);
    StepResult step = run_step(x, net, phi, sample.u, sample.z, t, cfg, graph);
    x = std::move(step.x);
    net.theta = std::move(step.theta);
    phi = std::move(step.phi);
    if (on_record) on_record(step.record);
    result.trace.push_back(std::move(step.record));
  }
  result.net = std::move(net);
  result.final_state = std::move(x);
  return result;
}

}  // namespace noc
