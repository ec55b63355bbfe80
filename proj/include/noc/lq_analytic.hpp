#pragma once

#include <vector>

namespace noc {

// Scalar linear-quadratic problem: f = A x + B a, l = Q x^2/2 + R a^2/2.
struct LQParams {
  double A = 0.0;
  double B = 1.0;
  double Q = 1.0;
  double R = 1.0;

  void validate() const;  // Q > 0, R > 0, B != 0
};

// H(x, rho) = Q x^2/2 - B^2 rho^2/(2R) + A x rho
double lq_hamiltonian(double x, double rho, const LQParams& params);

// x' = -B^2 p / R + A x,  p' = -Q x - A p
struct LQDeriv {
  double x_dot = 0.0;
  double p_dot = 0.0;
};
LQDeriv lq_hamilton_rhs(double x, double p, const LQParams& params);

// theta' = (B^2/R) theta^2 - 2 A theta - Q, and its sign-flipped companion.
double lq_riccati_rhs(double theta, const LQParams& params);
double lq_time_reversed_rhs(double theta, const LQParams& params);

// theta_hat(s) = (R/B^2) l1 l2 (e^{l1 s} - e^{l2 s}) / (l2 e^{l1 s} - l1 e^{l2 s}),
// l_{1,2} = A +- sqrt(A^2 + Q B^2 / R). Evaluated with e^{l1 s} factored out
// so large s cannot overflow. s >= 0.
double lq_closed_form(double s, const LQParams& params);

// Large-s limit l1 R / B^2.
double lq_asymptote(const LQParams& params);

struct LQPoint {
  double t = 0.0;
  double x = 0.0;
  double p = 0.0;
};

// RK4 integration of the Hamilton equations; n steps of size tau.
std::vector<LQPoint> lq_hamilton_flow_rk4(double x0, double p0, double tau,
                                          int n_steps, const LQParams& params);

// Least-squares slope of log|(x,p)| over the tail fraction of a trajectory.
double fit_growth_rate(const std::vector<LQPoint>& flow,
                       double tail_fraction = 1.0 / 3.0);

struct LQBridgeResult {
  std::vector<double> theta;  // n_steps + 1 values, theta[0] = theta0
  std::vector<double> delta;  // per-step minimizer of Omega_t
};

// Drives the generic machinery (omega_closed_form_min + theta_update) on the
// one-dimensional LQ instance with mu(x, theta) = theta * x and eps = 0,
// using a fixed probe state x = 1. Stability needs tau < R/(B^2 |theta|_max).
LQBridgeResult lq_forward_flow_bridge(const LQParams& params, double theta0,
                                      double tau, int n_steps);

}  // namespace noc
