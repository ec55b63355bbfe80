#include "noc/state_model.hpp"

#include <string>

#include "noc/errors.hpp"

namespace noc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("state_model: ") + what);
}

}  // namespace

Eigen::VectorXd flatten(const StateVector& x) {
  const int m = static_cast<int>(x.y.size());
  const int ne = static_cast<int>(x.w.size());
  const int d = static_cast<int>(x.k.cols());
  require(x.b.size() == m, "y/b size mismatch");
  require(x.k.rows() == m || (m == 0 && x.k.rows() == 0), "k row mismatch");
  Eigen::VectorXd out(m + ne + m + m * d);
  out.head(m) = x.y;
  out.segment(m, ne) = x.w;
  out.segment(m + ne, m) = x.b;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) out[m + ne + m + i * d + j] = x.k(i, j);
  return out;
}

Eigen::VectorXd flatten(const ControlVector& a) {
  const int m = static_cast<int>(a.nu.size());
  const int ne = static_cast<int>(a.omega.size());
  const int d = static_cast<int>(a.chi.cols());
  require(a.chi.rows() == m || (m == 0 && a.chi.rows() == 0), "chi row mismatch");
  Eigen::VectorXd out(ne + m + m * d);
  out.head(ne) = a.omega;
  out.segment(ne, m) = a.nu;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) out[ne + m + i * d + j] = a.chi(i, j);
  return out;
}

StateVector unflatten_state(const Eigen::VectorXd& x, const NetworkGraph& graph) {
  const StateLayout lay = graph.layout();
  require(x.size() == lay.n(), "flat state has wrong length");
  StateVector out;
  out.y = x.head(lay.m);
  out.w = x.segment(lay.w_offset(), lay.num_edges);
  out.b = x.segment(lay.b_offset(), lay.m);
  out.k.resize(lay.m, lay.d);
  for (int i = 0; i < lay.m; ++i)
    for (int j = 0; j < lay.d; ++j) out.k(i, j) = x[lay.k_offset() + i * lay.d + j];
  return out;
}

ControlVector unflatten_control(const Eigen::VectorXd& a, const NetworkGraph& graph) {
  const StateLayout lay = graph.layout();
  require(a.size() == lay.control_dim(), "flat control has wrong length");
  ControlVector out;
  out.omega = a.head(lay.num_edges);
  out.nu = a.segment(lay.num_edges, lay.m);
  out.chi.resize(lay.m, lay.d);
  for (int i = 0; i < lay.m; ++i)
    for (int j = 0; j < lay.d; ++j)
      out.chi(i, j) = a[lay.num_edges + lay.m + i * lay.d + j];
  return out;
}

Eigen::VectorXd ctrnn_preactivations(const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& w,
                                     const Eigen::VectorXd& b,
                                     const Eigen::MatrixXd& k,
                                     const NetworkGraph& graph) {
  const int m = graph.num_neurons();
  const int d = graph.input_dim();
  require(y.size() == m, "y has wrong length");
  require(w.size() == graph.num_edges(), "w has wrong length");
  require(b.size() == m, "b has wrong length");
  require(u.size() == d, "u has wrong length");
  require((d == 0 && k.size() == 0) || (k.rows() == m && k.cols() == d),
          "k has wrong shape");

  Eigen::VectorXd a = b;
  for (int i = 0; i < m; ++i) {
    for (const auto& [src, edge] : graph.parents(i)) a[i] += w[edge] * y[src];
    for (int j = 0; j < d; ++j) a[i] += k(i, j) * u[j];
  }
  return a;
}

Eigen::VectorXd ctrnn_forward(const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& w, const Eigen::VectorXd& b,
                              const Eigen::MatrixXd& k, const NetworkGraph& graph,
                              const ActivationSpec& act) {
  const Eigen::VectorXd a = ctrnn_preactivations(y, u, w, b, k, graph);
  Eigen::VectorXd dy(y.size());
  for (int i = 0; i < y.size(); ++i)
    dy[i] = -act.leak_scale * y[i] + activation_value(act.kind, a[i]);
  return dy;
}

Eigen::VectorXd state_derivative(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& alpha,
                                 const Eigen::VectorXd& u,
                                 const NetworkGraph& graph,
                                 const ActivationSpec& act) {
  const StateLayout lay = graph.layout();
  require(x.size() == lay.n(), "flat state has wrong length");
  require(alpha.size() == lay.control_dim(), "flat control has wrong length");

  const StateVector sv = unflatten_state(x, graph);
  Eigen::VectorXd dx(lay.n());
  dx.head(lay.m) = ctrnn_forward(sv.y, u, sv.w, sv.b, sv.k, graph, act);
  dx.tail(lay.control_dim()) = alpha;
  return dx;
}

Eigen::VectorXd euler_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx,
                           double tau) {
  require(x.size() == dx.size(), "euler_step length mismatch");
  return x + tau * dx;
}

}  // namespace noc
