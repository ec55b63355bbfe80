#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "noc/costate_net.hpp"
#include "noc/hamiltonian.hpp"
#include "noc/signals.hpp"
#include "noc/state_model.hpp"

namespace noc {

enum class Optimizer { PlainGd, Adam };

// Everything a run needs. Seeds for the gamma-parameter init, the mu-weight
// init and the signal schedule all derive from the single master seed.
struct SimConfig {
  double tau = 0.5;    // Euler step, seconds
  int n_T = 1;         // time steps
  int n_iter = 1;      // inner descent iterations
  double lambda = 1e-5;
  double epsilon = 0.0;
  Optimizer optimizer = Optimizer::PlainGd;
  LagrangianParams lagrangian;

  // gamma network
  int num_neurons = 2;
  bool self_loops = true;
  Activation activation = Activation::Tanh;
  double leak_scale = 1.0;
  double gamma_init_scale = 0.1;

  // mu network
  int mu_hidden = 20;
  Activation mu_activation = Activation::Relu;
  bool mu_feed_input = false;
  double mu_init_gain = 1.0;
  bool mu_uniform_bias_init = false;

  std::uint64_t seed = 1;
  double t0 = 0.0;
  SignalSpec signal;

  void validate() const;
  NetworkGraph make_graph() const;
  ActivationSpec make_activation() const { return {activation, leak_scale}; }
  double horizon() const { return n_T * tau; }
};

struct TraceRecord {
  int step = 0;
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  Eigen::VectorXd alpha;
  double z = 0.0;
  Eigen::VectorXd u;
  double pi_x = 0.0;
  double lagrangian = 0.0;
  double omega_final = 0.0;
  double hamiltonian = 0.0;
};

// Omega_t(phi) = 1/2 |Jx x' + Jtheta phi + Hx|^2 + eps/2 |phi|^2
double omega_loss(const Eigen::VectorXd& phi, const Eigen::MatrixXd& jac_x,
                  const Eigen::MatrixXd& jac_theta, const Eigen::VectorXd& x_dot,
                  const Eigen::VectorXd& h_x, double eps);

// Jtheta' (Jx x' + Jtheta phi + Hx) + eps phi
Eigen::VectorXd omega_gradient(const Eigen::VectorXd& phi,
                               const Eigen::MatrixXd& jac_x,
                               const Eigen::MatrixXd& jac_theta,
                               const Eigen::VectorXd& x_dot,
                               const Eigen::VectorXd& h_x, double eps);

// Unique minimizer via the normal equations; test oracle and LQ bridge,
// never the production inner loop.
Eigen::VectorXd omega_closed_form_min(const Eigen::MatrixXd& jac_x,
                                      const Eigen::MatrixXd& jac_theta,
                                      const Eigen::VectorXd& x_dot,
                                      const Eigen::VectorXd& h_x, double eps);

// n_iter optimizer steps on Omega_t starting from phi0. Adam uses
// beta1=0.9, beta2=0.999, eps=1e-8 with fresh moments per call.
Eigen::VectorXd inner_descent(const Eigen::VectorXd& phi0,
                              const Eigen::MatrixXd& jac_x,
                              const Eigen::MatrixXd& jac_theta,
                              const Eigen::VectorXd& x_dot,
                              const Eigen::VectorXd& h_x, double eps,
                              int n_iter, double lambda, Optimizer opt,
                              std::vector<double>* loss_history = nullptr);

// Euler step of theta' = -delta_theta: theta - tau * delta_theta.
Eigen::VectorXd theta_update(const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& delta_theta, double tau);

struct StepResult {
  Eigen::VectorXd x;      // state after the Euler step
  Eigen::VectorXd theta;  // mu parameters after the time-reversed update
  Eigen::VectorXd phi;    // inner-loop iterate, warm start for the next step
  TraceRecord record;
};

// One pass of the main loop: costate estimate, closed-form control, state
// derivative, H and H_x, inner descent on Omega_t, theta and state updates.
StepResult run_step(const Eigen::VectorXd& x, const CostateNet& net,
                    const Eigen::VectorXd& phi_prev, const Eigen::VectorXd& u,
                    double z, int step_index, const SimConfig& cfg,
                    const NetworkGraph& graph);

struct SimResult {
  std::vector<TraceRecord> trace;
  CostateNet net;              // final mu
  Eigen::VectorXd final_state;
};

using RecordCallback = std::function<void(const TraceRecord&)>;

// n_T steps, deterministic in cfg.seed. The callback (when given) sees each
// record as it is produced, so a caller keeps the prefix on divergence.
SimResult run_simulation(const SimConfig& cfg,
                         const RecordCallback& on_record = {});

}  // namespace noc
