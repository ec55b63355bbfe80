#include "noc/hamiltonian.hpp"

#include <string>

#include "noc/errors.hpp"

namespace noc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("hamiltonian: ") + what);
}

// Indices the r1 term covers: every non-output coordinate of x when
// regularize_params, otherwise only non-output y coordinates.
bool regularized(int idx, const LagrangianParams& params, const StateLayout& lay,
                 int output_index) {
  if (idx == output_index) return false;
  if (idx < lay.m) return true;
  return params.regularize_params;
}

}  // namespace

void LagrangianParams::validate() const {
  if (q < 0.0 || r1 < 0.0) throw ConfigError("lagrangian weights must be >= 0");
  if (r2 <= 0.0) throw ConfigError("r2 must be > 0");
}

double lagrangian(const Eigen::VectorXd& alpha, const Eigen::VectorXd& x,
                  double z_s, const LagrangianParams& params,
                  const StateLayout& layout, int output_index) {
  require(x.size() == layout.n(), "x has wrong length");
  require(alpha.size() == layout.control_dim(), "alpha has wrong length");
  require(output_index >= 0 && output_index < layout.m, "bad output index");

  const double track = x[output_index] - z_s;
  double state_reg = 0.0;
  for (int i = 0; i < x.size(); ++i)
    if (regularized(i, params, layout, output_index)) state_reg += x[i] * x[i];
  return 0.5 * params.q * track * track + 0.5 * params.r1 * state_reg +
         0.5 * params.r2 * alpha.squaredNorm();
}

Eigen::VectorXd lagrangian_grad_x(const Eigen::VectorXd& alpha,
                                  const Eigen::VectorXd& x, double z_s,
                                  const LagrangianParams& params,
                                  const StateLayout& layout, int output_index) {
  require(x.size() == layout.n(), "x has wrong length");
  require(alpha.size() == layout.control_dim(), "alpha has wrong length");
  (void)alpha;

  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  g[output_index] = params.q * (x[output_index] - z_s);
  for (int i = 0; i < x.size(); ++i)
    if (regularized(i, params, layout, output_index)) g[i] += params.r1 * x[i];
  return g;
}

Eigen::VectorXd optimal_control(const Eigen::VectorXd& p, double r2,
                                const StateLayout& layout) {
  require(p.size() == layout.n(), "p has wrong length");
  if (r2 == 0.0)
    throw SingularControlError("r2 = 0: control stationarity is singular");
  return -p.segment(layout.param_offset(), layout.control_dim()) / r2;
}

double pseudo_hamiltonian(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& alpha, const Eigen::VectorXd& u,
                          double z_s, const LagrangianParams& params,
                          const NetworkGraph& graph, const ActivationSpec& act) {
  require(p.size() == x.size(), "p/x length mismatch");
  const Eigen::VectorXd dx = state_derivative(x, alpha, u, graph, act);
  return p.dot(dx) +
         lagrangian(alpha, x, z_s, params, graph.layout(), graph.output_index());
}

Eigen::VectorXd pseudo_hamiltonian_grad_alpha(const Eigen::VectorXd& p,
                                              const Eigen::VectorXd& alpha,
                                              const LagrangianParams& params,
                                              const StateLayout& layout) {
  require(p.size() == layout.n(), "p has wrong length");
  require(alpha.size() == layout.control_dim(), "alpha has wrong length");
  return p.segment(layout.param_offset(), layout.control_dim()) +
         params.r2 * alpha;
}

double hamiltonian_value(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                         const Eigen::VectorXd& u, double z_s,
                         const LagrangianParams& params,
                         const NetworkGraph& graph, const ActivationSpec& act) {
  const Eigen::VectorXd alpha = optimal_control(p, params.r2, graph.layout());
  return pseudo_hamiltonian(x, p, alpha, u, z_s, params, graph, act);
}

Eigen::VectorXd hamiltonian_grad_x(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& u, double z_s,
                                   const LagrangianParams& params,
                                   const NetworkGraph& graph,
                                   const ActivationSpec& act) {
  const StateLayout lay = graph.layout();
  require(x.size() == lay.n(), "x has wrong length");
  require(p.size() == lay.n(), "p has wrong length");

  const Eigen::VectorXd alpha = optimal_control(p, params.r2, lay);
  const StateVector sv = unflatten_state(x, graph);
  const Eigen::VectorXd a =
      ctrnn_preactivations(sv.y, u, sv.w, sv.b, sv.k, graph);

  // grad of p . f: only the y-block of f depends on x, through
  // gamma_i = -leak y_i + sigma(a_i).
  Eigen::VectorXd g = Eigen::VectorXd::Zero(lay.n());
  for (int i = 0; i < lay.m; ++i) {
    const double ps = p[i] * activation_deriv(act.kind, a[i]);
    g[i] -= act.leak_scale * p[i];
    for (const auto& [src, edge] : graph.parents(i)) {
      g[src] += ps * sv.w[edge];                 // d a_i / d y_src
      g[lay.w_offset() + edge] += ps * sv.y[src];  // d a_i / d w_edge
    }
    g[lay.b_offset() + i] += ps;
    for (int j = 0; j < lay.d; ++j) g[lay.k_offset() + i * lay.d + j] += ps * u[j];
  }
  return g + lagrangian_grad_x(alpha, x, z_s, params, lay, graph.output_index());
}

Eigen::VectorXd costate_derivative(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& p,
                                   const Eigen::VectorXd& u, double z_s,
                                   const LagrangianParams& params,
                                   const NetworkGraph& graph,
                                   const ActivationSpec& act) {
  return -hamiltonian_grad_x(x, p, u, z_s, params, graph, act);
}

}  // namespace noc
