#include "noc/selfcheck.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <vector>

#include "noc/costate_net.hpp"
#include "noc/hamiltonian.hpp"
#include "noc/lq_analytic.hpp"
#include "noc/riccati_flow.hpp"
#include "noc/rng.hpp"
#include "noc/state_model.hpp"
#include "noc/trace_io.hpp"

namespace noc {

namespace {

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

Eigen::VectorXd random_vec(SplitMix64& rng, int n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform_sym(scale);
  return v;
}

}  // namespace

int run_self_checks(std::ostream& out) {
  int failures = 0;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    out << (ok ? "[ ok ] " : "[FAIL] ") << name;
    if (!detail.empty()) out << " — " << detail;
    out << "\n";
    if (!ok) ++failures;
  };

  const LQParams unit{0.0, 1.0, 1.0, 1.0};

  {  // Hamilton flow blows up at rate omega
    const auto flow = lq_hamilton_flow_rk4(1.0, 0.0, 0.01, 1000, unit);
    const double rate = fit_growth_rate(flow);
    std::ostringstream d;
    d << "fitted rate " << rate << ", expected 1.0";
    report("lq hamilton-flow instability", std::abs(rate - 1.0) < 0.05, d.str());
  }

  {  // Euler on the time-reversed flow tracks the closed form
    double theta = 0.0, max_err = 0.0;
    for (int k = 0; k < 3000; ++k) {
      theta += 0.01 * lq_time_reversed_rhs(theta, unit);
      max_err = std::max(max_err,
                         std::abs(theta - lq_closed_form((k + 1) * 0.01, unit)));
    }
    std::ostringstream d;
    d << "max err " << max_err << ", final " << theta;
    report("lq time-reversed flow vs closed form",
           max_err < 5e-3 && std::abs(theta - lq_asymptote(unit)) < 1e-3,
           d.str());
  }

  {  // linear-mu reduction recovers the Riccati right-hand side
    SplitMix64 rng(11);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const LQParams P{rng.uniform_sym(2.0), 0.5 + rng.uniform(),
                       0.1 + rng.uniform(), 0.1 + rng.uniform()};
      const double theta = rng.uniform_sym(3.0);
      const double x = 0.2 + rng.uniform();
      Eigen::MatrixXd jx(1, 1), jt(1, 1);
      jx(0, 0) = theta;
      jt(0, 0) = x;
      Eigen::VectorXd xd(1), hx(1);
      xd[0] = (P.A - P.B * P.B * theta / P.R) * x;
      hx[0] = (P.Q + P.A * theta) * x;
      const double delta = omega_closed_form_min(jx, jt, xd, hx, 0.0)[0];
      worst = std::max(worst, std::abs(delta - lq_riccati_rhs(theta, P)));
    }
    std::ostringstream d;
    d << "worst |delta - rhs| = " << worst;
    report("riccati reduction of omega minimizer", worst < 1e-8, d.str());
  }

  {  // mu jacobians against central differences
    SplitMix64 rng(23);
    double worst = 0.0;
    for (Activation act : {Activation::Tanh, Activation::Relu}) {
      CostateNet net = make_costate_net(5, 7, act, 5);
      init_theta(net, rng.next(), 1.0, true);
      Eigen::VectorXd x = random_vec(rng, 5);
      const Eigen::MatrixXd jx = mu_jacobian_x(net, x, {});
      const Eigen::MatrixXd jt = mu_jacobian_theta(net, x, {});
      const double h = 1e-5;
      for (int c = 0; c < 5; ++c) {
        Eigen::VectorXd xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const Eigen::VectorXd fd =
            (mu_forward(net, xp, {}) - mu_forward(net, xm, {})) / (2 * h);
        for (int r = 0; r < 5; ++r) worst = std::max(worst, rel_err(jx(r, c), fd[r]));
      }
      for (int c = 0; c < net.param_count(); c += 9) {
        CostateNet np = net, nm = net;
        np.theta[c] += h;
        nm.theta[c] -= h;
        const Eigen::VectorXd fd =
            (mu_forward(np, x, {}) - mu_forward(nm, x, {})) / (2 * h);
        for (int r = 0; r < 5; ++r) worst = std::max(worst, rel_err(jt(r, c), fd[r]));
      }
    }
    std::ostringstream d;
    d << "worst rel err " << worst;
    report("mu jacobians vs finite differences", worst < 1e-5, d.str());
  }

  {  // H_x against finite differences of the frozen-control pseudo-Hamiltonian
    SplitMix64 rng(37);
    const NetworkGraph graph = NetworkGraph::fully_connected(2, 1);
    const ActivationSpec act{Activation::Tanh, 0.5};
    const LagrangianParams lp{2.0, 0.7, 1.5, true};
    const StateLayout lay = graph.layout();
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd x = random_vec(rng, lay.n());
      const Eigen::VectorXd p = random_vec(rng, lay.n());
      const Eigen::VectorXd u = random_vec(rng, 1);
      const double z = rng.uniform_sym(1.0);
      const Eigen::VectorXd alpha = optimal_control(p, lp.r2, lay);
      const Eigen::VectorXd g = hamiltonian_grad_x(x, p, u, z, lp, graph, act);
      const double h = 1e-5;
      for (int c = 0; c < lay.n(); ++c) {
        Eigen::VectorXd xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const double fd = (pseudo_hamiltonian(xp, p, alpha, u, z, lp, graph, act) -
                           pseudo_hamiltonian(xm, p, alpha, u, z, lp, graph, act)) /
                          (2 * h);
        worst = std::max(worst, rel_err(g[c], fd));
      }
    }
    std::ostringstream d;
    d << "worst rel err " << worst;
    report("H_x vs finite differences", worst < 1e-5, d.str());
  }

  {  // stationarity and minimality of the closed-form control
    SplitMix64 rng(53);
    const NetworkGraph graph = NetworkGraph::fully_connected(2, 0);
    const ActivationSpec act{Activation::Tanh, 1.0};
    const LagrangianParams lp{3.0, 0.5, 2.0, true};
    const StateLayout lay = graph.layout();
    bool ok = true;
    for (int i = 0; i < 5 && ok; ++i) {
      const Eigen::VectorXd x = random_vec(rng, lay.n());
      const Eigen::VectorXd p = random_vec(rng, lay.n());
      const Eigen::VectorXd alpha = optimal_control(p, lp.r2, lay);
      ok = pseudo_hamiltonian_grad_alpha(p, alpha, lp, lay).norm() < 1e-10;
      const double h_star = pseudo_hamiltonian(x, p, alpha, {}, 0.3, lp, graph, act);
      for (int probe = 0; probe < 100 && ok; ++probe) {
        const Eigen::VectorXd delta = random_vec(rng, lay.control_dim(), 0.5);
        ok = h_star <=
             pseudo_hamiltonian(x, p, alpha + delta, {}, 0.3, lp, graph, act) +
                 1e-12;
      }
    }
    report("control stationarity and minimality", ok, "");
  }

  {  // omega gradient is exact and vanishes at the closed-form minimizer
    SplitMix64 rng(71);
    const int n = 4, M = 9;
    Eigen::MatrixXd jx(n, n), jt(n, M);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) jx(i, j) = rng.uniform_sym(1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < M; ++j) jt(i, j) = rng.uniform_sym(1.0);
    const Eigen::VectorXd xd = random_vec(rng, n);
    const Eigen::VectorXd hx = random_vec(rng, n);
    const double eps = 0.2;
    const Eigen::VectorXd phi = random_vec(rng, M);
    const Eigen::VectorXd grad = omega_gradient(phi, jx, jt, xd, hx, eps);
    double worst = 0.0;
    const double h = 1e-6;
    for (int c = 0; c < M; ++c) {
      Eigen::VectorXd pp = phi, pm = phi;
      pp[c] += h;
      pm[c] -= h;
      const double fd = (omega_loss(pp, jx, jt, xd, hx, eps) -
                         omega_loss(pm, jx, jt, xd, hx, eps)) /
                        (2 * h);
      worst = std::max(worst, rel_err(grad[c], fd));
    }
    const Eigen::VectorXd star = omega_closed_form_min(jx, jt, xd, hx, eps);
    const double g_at_min = omega_gradient(star, jx, jt, xd, hx, eps).norm();
    std::ostringstream d;
    d << "grad fd err " << worst << ", |grad| at minimizer " << g_at_min;
    report("omega gradient identities", worst < 1e-8 && g_at_min < 1e-8, d.str());
  }

  {  // micro-run determinism
    SimConfig cfg;
    cfg.tau = 0.5;
    cfg.n_T = 20;
    cfg.n_iter = 5;
    cfg.lambda = 1e-4;
    cfg.epsilon = 1.0;
    cfg.lagrangian = {10.0, 1.0, 10.0, true};
    cfg.leak_scale = 0.5;
    cfg.mu_hidden = 6;
    cfg.signal.kind = SignalKind::Sine;
    cfg.signal.frequency = 0.001;
    cfg.seed = 5;
    std::ostringstream csv1, csv2;
    write_trace_csv(csv1, run_simulation(cfg).trace);
    write_trace_csv(csv2, run_simulation(cfg).trace);
    report("seeded determinism", csv1.str() == csv2.str(), "");
  }

  out << (failures == 0 ? "all checks passed" : "checks FAILED") << "\n";
  return failures;
}

}  // namespace noc
