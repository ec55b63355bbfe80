#pragma once

#include <Eigen/Dense>

#include "noc/state_model.hpp"

namespace noc {

// Running-cost weights: q tracking, r1 state regularization, r2 control
// regularization. r2 > 0 is required by the closed-form control.
//
// regularize_params selects the span of the r1 sum: with true it covers every
// non-output state coordinate (parameters included); with false only the
// non-output neuron outputs.
struct LagrangianParams {
  double q = 0.0;
  double r1 = 0.0;
  double r2 = 1.0;
  bool regularize_params = true;

  void validate() const;
};

// l(alpha, x, s) = q/2 (x[out]-z)^2 + r1/2 sum_reg x_i^2 + r2/2 |alpha|^2
double lagrangian(const Eigen::VectorXd& alpha, const Eigen::VectorXd& x,
                  double z_s, const LagrangianParams& params,
                  const StateLayout& layout, int output_index);

Eigen::VectorXd lagrangian_grad_x(const Eigen::VectorXd& alpha,
                                  const Eigen::VectorXd& x, double z_s,
                                  const LagrangianParams& params,
                                  const StateLayout& layout, int output_index);

// Stationarity of the pseudo-Hamiltonian in alpha:
//   omega* = -p_w/r2, nu* = -p_b/r2, chi* = -p_k/r2.
Eigen::VectorXd optimal_control(const Eigen::VectorXd& p, double r2,
                                const StateLayout& layout);

// H~(x, p, alpha, s) = p . f(x, alpha, s) + l(alpha, x, s)
double pseudo_hamiltonian(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& alpha, const Eigen::VectorXd& u,
                          double z_s, const LagrangianParams& params,
                          const NetworkGraph& graph, const ActivationSpec& act);

// d(H~)/d(alpha) = (w,b,k block of p) + r2 * alpha; zero at alpha*.
Eigen::VectorXd pseudo_hamiltonian_grad_alpha(const Eigen::VectorXd& p,
                                              const Eigen::VectorXd& alpha,
                                              const LagrangianParams& params,
                                              const StateLayout& layout);

// H(x, p, s) = min_alpha H~ = H~ at alpha*.
double hamiltonian_value(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                         const Eigen::VectorXd& u, double z_s,
                         const LagrangianParams& params,
                         const NetworkGraph& graph, const ActivationSpec& act);

// H_x holding alpha* fixed. Exact for this quadratic-in-alpha structure:
// d(H~)/d(alpha) = 0 at alpha*, so the frozen gradient equals the gradient
// of the minimized Hamiltonian.
Eigen::VectorXd hamiltonian_grad_x(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& u, double z_s,
                                   const LagrangianParams& params,
                                   const NetworkGraph& graph,
                                   const ActivationSpec& act);

// p' = -H_x
Eigen::VectorXd costate_derivative(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& u, double z_s,
                                   const LagrangianParams& params,
                                   const NetworkGraph& graph,
                                   const ActivationSpec& act);

}  // namespace noc
