#pragma once

#include <Eigen/Dense>

#include "noc/activation.hpp"
#include "noc/graph.hpp"

namespace noc {

// Structured view of the state x = (y, w, b, k).
struct StateVector {
  Eigen::VectorXd y;  // m
  Eigen::VectorXd w;  // one per edge, graph edge order
  Eigen::VectorXd b;  // m
  Eigen::MatrixXd k;  // m x d
};

// Structured view of the control alpha = (omega, nu, chi): the velocities of
// (w, b, k).
struct ControlVector {
  Eigen::VectorXd omega;  // one per edge
  Eigen::VectorXd nu;     // m
  Eigen::MatrixXd chi;    // m x d
};

Eigen::VectorXd flatten(const StateVector& x);
Eigen::VectorXd flatten(const ControlVector& a);
StateVector unflatten_state(const Eigen::VectorXd& x, const NetworkGraph& graph);
ControlVector unflatten_control(const Eigen::VectorXd& a, const NetworkGraph& graph);

// a_i = sum_{j in pa(i)} w_ij y_j + b_i + sum_j k_ij u_j
Eigen::VectorXd ctrnn_preactivations(const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& w,
                                     const Eigen::VectorXd& b,
                                     const Eigen::MatrixXd& k,
                                     const NetworkGraph& graph);

// y'_i = -leak_scale * y_i + sigma(a_i)
Eigen::VectorXd ctrnn_forward(const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& w, const Eigen::VectorXd& b,
                              const Eigen::MatrixXd& k, const NetworkGraph& graph,
                              const ActivationSpec& act);

// Full augmented dynamics on flat vectors:
// x' = (ctrnn_forward, omega, nu, chi).
Eigen::VectorXd state_derivative(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& alpha,
                                 const Eigen::VectorXd& u,
                                 const NetworkGraph& graph,
                                 const ActivationSpec& act);

// x + tau * dx
Eigen::VectorXd euler_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx,
                           double tau);

}  // namespace noc
