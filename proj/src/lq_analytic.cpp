#include "noc/lq_analytic.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "noc/errors.hpp"
#include "noc/riccati_flow.hpp"

namespace noc {

void LQParams::validate() const {
  if (Q <= 0.0) throw ConfigError("LQ: Q must be > 0");
  if (R <= 0.0) throw ConfigError("LQ: R must be > 0");
  if (B == 0.0) throw ConfigError("LQ: B must be nonzero");
}

double lq_hamiltonian(double x, double rho, const LQParams& params) {
  params.validate();
  return 0.5 * params.Q * x * x -
         params.B * params.B * rho * rho / (2.0 * params.R) +
         params.A * x * rho;
}

LQDeriv lq_hamilton_rhs(double x, double p, const LQParams& params) {
  params.validate();
  return {-params.B * params.B * p / params.R + params.A * x,
          -params.Q * x - params.A * p};
}

double lq_riccati_rhs(double theta, const LQParams& params) {
  params.validate();
  return (params.B * params.B / params.R) * theta * theta -
         2.0 * params.A * theta - params.Q;
}

double lq_time_reversed_rhs(double theta, const LQParams& params) {
  return -lq_riccati_rhs(theta, params);
}

double lq_closed_form(double s, const LQParams& params) {
  params.validate();
  if (s < 0.0) throw DomainError("lq_closed_form needs s >= 0");
  const double disc =
      std::sqrt(params.A * params.A + params.Q * params.B * params.B / params.R);
  const double l1 = params.A + disc;
  const double l2 = params.A - disc;
  // factor out e^{l1 s}; g <= 1 decays, so large s stays finite
  const double g = std::exp((l2 - l1) * s);
  const double den = l2 - l1 * g;
  if (std::abs(den) < 1e-300)
    throw NumericalRankError("lq_closed_form denominator underflow");
  return (params.R / (params.B * params.B)) * l1 * l2 * (1.0 - g) / den;
}

double lq_asymptote(const LQParams& params) {
  params.validate();
  const double disc =
      std::sqrt(params.A * params.A + params.Q * params.B * params.B / params.R);
  return (params.A + disc) * params.R / (params.B * params.B);
}

std::vector<LQPoint> lq_hamilton_flow_rk4(double x0, double p0, double tau,
                                          int n_steps, const LQParams& params) {
  params.validate();
  if (tau <= 0.0) throw ConfigError("lq_hamilton_flow_rk4 needs tau > 0");
  std::vector<LQPoint> out;
  out.reserve(n_steps + 1);
  double x = x0, p = p0;
  out.push_back({0.0, x, p});
  for (int k = 0; k < n_steps; ++k) {
    const LQDeriv k1 = lq_hamilton_rhs(x, p, params);
    const LQDeriv k2 =
        lq_hamilton_rhs(x + 0.5 * tau * k1.x_dot, p + 0.5 * tau * k1.p_dot, params);
    const LQDeriv k3 =
        lq_hamilton_rhs(x + 0.5 * tau * k2.x_dot, p + 0.5 * tau * k2.p_dot, params);
    const LQDeriv k4 =
        lq_hamilton_rhs(x + tau * k3.x_dot, p + tau * k3.p_dot, params);
    x += tau / 6.0 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
    p += tau / 6.0 * (k1.p_dot + 2.0 * k2.p_dot + 2.0 * k3.p_dot + k4.p_dot);
    if (!std::isfinite(x) || !std::isfinite(p))
      throw DivergenceError("LQ Hamilton flow non-finite", k);
    out.push_back({(k + 1) * tau, x, p});
  }
  return out;
}

double fit_growth_rate(const std::vector<LQPoint>& flow, double tail_fraction) {
  if (flow.size() < 3) throw ConfigError("fit_growth_rate needs >= 3 points");
  const std::size_t start =
      static_cast<std::size_t>(double(flow.size()) * (1.0 - tail_fraction));
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t count = 0;
  for (std::size_t i = start; i < flow.size(); ++i) {
    const double norm = std::hypot(flow[i].x, flow[i].p);
    if (norm <= 0.0) throw ConfigError("fit_growth_rate: zero norm in tail");
    const double t = flow[i].t, y = std::log(norm);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++count;
  }
  const double denom = double(count) * stt - st * st;
  if (denom == 0.0) throw ConfigError("fit_growth_rate: degenerate abscissae");
  return (double(count) * sty - st * sy) / denom;
}

LQBridgeResult lq_forward_flow_bridge(const LQParams& params, double theta0,
                                      double tau, int n_steps) {
  params.validate();
  if (tau <= 0.0) throw ConfigError("bridge needs tau > 0");

  // mu(x, theta) = theta x at the probe state x = 1:
  //   J_x = theta, J_theta = x, x' = (A - B^2 theta / R) x,
  //   H_x = (Q + A theta) x.
  const double x_probe = 1.0;
  LQBridgeResult out;
  out.theta.reserve(n_steps + 1);
  out.delta.reserve(n_steps);
  Eigen::VectorXd theta(1);
  theta[0] = theta0;
  out.theta.push_back(theta0);

  for (int k = 0; k < n_steps; ++k) {
    Eigen::MatrixXd jac_x(1, 1), jac_theta(1, 1);
    jac_x(0, 0) = theta[0];
    jac_theta(0, 0) = x_probe;
    Eigen::VectorXd x_dot(1), h_x(1);
    x_dot[0] = (params.A - params.B * params.B * theta[0] / params.R) * x_probe;
    h_x[0] = (params.Q + params.A * theta[0]) * x_probe;

    const Eigen::VectorXd delta =
        omega_closed_form_min(jac_x, jac_theta, x_dot, h_x, 0.0);
    theta = theta_update(theta, delta, tau);
    if (!std::isfinite(theta[0]))
      throw DivergenceError("LQ bridge flow non-finite", k);
    out.delta.push_back(delta[0]);
    out.theta.push_back(theta[0]);
  }
  return out;
}

}  // namespace noc
