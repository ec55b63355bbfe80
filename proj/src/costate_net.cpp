#include "noc/costate_net.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "noc/errors.hpp"
#include "noc/rng.hpp"

namespace noc {

namespace {

constexpr const char* kThetaLayoutTag = "theta-v1";

using RowMajorMap = Eigen::Map<
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// z = x, or x concatenated with u when the net was sized for it.
Eigen::VectorXd net_input(const CostateNet& net, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& u) {
  if (net.input_dim == x.size()) return x;
  if (net.input_dim == x.size() + u.size() && u.size() > 0) {
    Eigen::VectorXd z(net.input_dim);
    z << x, u;
    return z;
  }
  throw ConfigError("costate_net: input size " + std::to_string(x.size()) +
                    "+" + std::to_string(u.size()) +
                    " does not match net input_dim " +
                    std::to_string(net.input_dim));
}

}  // namespace

CostateNet make_costate_net(int input_dim, int hidden_width,
                            Activation hidden_activation, int output_dim) {
  if (input_dim <= 0 || hidden_width <= 0 || output_dim <= 0)
    throw ConfigError("costate_net: dimensions must be positive");
  CostateNet net;
  net.input_dim = input_dim;
  net.hidden_width = hidden_width;
  net.hidden_activation = hidden_activation;
  net.output_dim = output_dim;
  net.theta = Eigen::VectorXd::Zero(net.param_count());
  return net;
}

Eigen::VectorXd pack_theta(const Eigen::MatrixXd& W1, const Eigen::VectorXd& c1,
                           const Eigen::MatrixXd& W2, const Eigen::VectorXd& c2) {
  const int h = static_cast<int>(W1.rows());
  const int in = static_cast<int>(W1.cols());
  const int out = static_cast<int>(W2.rows());
  if (c1.size() != h || W2.cols() != h || c2.size() != out)
    throw ConfigError("pack_theta: inconsistent block shapes");
  Eigen::VectorXd theta(h * in + h + out * h + out);
  int at = 0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < in; ++c) theta[at++] = W1(r, c);
  for (int r = 0; r < h; ++r) theta[at++] = c1[r];
  for (int r = 0; r < out; ++r)
    for (int c = 0; c < h; ++c) theta[at++] = W2(r, c);
  for (int r = 0; r < out; ++r) theta[at++] = c2[r];
  return theta;
}

ThetaBlocks unpack_theta(const CostateNet& net) {
  if (net.theta.size() != net.param_count())
    throw ConfigError("unpack_theta: theta has wrong length");
  ThetaBlocks b;
  b.W1 = RowMajorMap(net.theta.data() + net.w1_offset(), net.hidden_width,
                     net.input_dim);
  b.c1 = net.theta.segment(net.c1_offset(), net.hidden_width);
  b.W2 = RowMajorMap(net.theta.data() + net.w2_offset(), net.output_dim,
                     net.hidden_width);
  b.c2 = net.theta.segment(net.c2_offset(), net.output_dim);
  return b;
}

void init_theta(CostateNet& net, std::uint64_t seed, double gain,
                bool uniform_biases) {
  SplitMix64 rng(seed);
  net.theta = Eigen::VectorXd::Zero(net.param_count());
  const double s1 = gain / std::sqrt(double(net.input_dim));
  const double s2 = gain / std::sqrt(double(net.hidden_width));
  for (int i = 0; i < net.hidden_width * net.input_dim; ++i)
    net.theta[net.w1_offset() + i] = rng.uniform_sym(s1);
  if (uniform_biases)
    for (int i = 0; i < net.hidden_width; ++i)
      net.theta[net.c1_offset() + i] = rng.uniform_sym(s1);
  for (int i = 0; i < net.output_dim * net.hidden_width; ++i)
    net.theta[net.w2_offset() + i] = rng.uniform_sym(s2);
  if (uniform_biases)
    for (int i = 0; i < net.output_dim; ++i)
      net.theta[net.c2_offset() + i] = rng.uniform_sym(s2);
}

Eigen::VectorXd mu_forward(const CostateNet& net, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u) {
  const Eigen::VectorXd z = net_input(net, x, u);
  const ThetaBlocks b = unpack_theta(net);
  Eigen::VectorXd a = b.W1 * z + b.c1;
  for (int r = 0; r < a.size(); ++r)
    a[r] = activation_value(net.hidden_activation, a[r]);
  return b.W2 * a + b.c2;
}

Eigen::MatrixXd mu_jacobian_x(const CostateNet& net, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u) {
  const Eigen::VectorXd z = net_input(net, x, u);
  const ThetaBlocks b = unpack_theta(net);
  Eigen::VectorXd a = b.W1 * z + b.c1;
  Eigen::VectorXd s(a.size());
  for (int r = 0; r < a.size(); ++r)
    s[r] = activation_deriv(net.hidden_activation, a[r]);
  // u columns excluded
  return b.W2 * s.asDiagonal() * b.W1.leftCols(x.size());
}

Eigen::MatrixXd mu_jacobian_theta(const CostateNet& net, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u) {
  const Eigen::VectorXd z = net_input(net, x, u);
  const ThetaBlocks blk = unpack_theta(net);
  const int h = net.hidden_width;
  const int in = net.input_dim;
  const int n = net.output_dim;

  Eigen::VectorXd a = blk.W1 * z + blk.c1;
  Eigen::VectorXd hid(h), s(h);
  for (int r = 0; r < h; ++r) {
    hid[r] = activation_value(net.hidden_activation, a[r]);
    s[r] = activation_deriv(net.hidden_activation, a[r]);
  }

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, net.param_count());
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < h; ++r) {
      const double g = blk.W2(i, r) * s[r];  // dp_i / da_r
      if (g != 0.0) {
        const int w1_row = net.w1_offset() + r * in;
        for (int c = 0; c < in; ++c) J(i, w1_row + c) = g * z[c];
      }
      J(i, net.c1_offset() + r) = g;
      J(i, net.w2_offset() + i * h + r) = hid[r];
    }
    J(i, net.c2_offset() + i) = 1.0;
  }
  return J;
}

void save_theta_csv(const std::string& path, const CostateNet& net) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << kThetaLayoutTag << "," << net.input_dim << "," << net.hidden_width
      << "," << activation_name(net.hidden_activation) << "," << net.output_dim
      << "\n";
  out.precision(17);
  for (int i = 0; i < net.theta.size(); ++i) out << net.theta[i] << "\n";
}

void load_theta_csv(const std::string& path, CostateNet& net) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  std::stringstream hs(header);
  std::string tag, in_dim, hidden, act, out_dim;
  std::getline(hs, tag, ',');
  std::getline(hs, in_dim, ',');
  std::getline(hs, hidden, ',');
  std::getline(hs, act, ',');
  std::getline(hs, out_dim, ',');
  if (tag != kThetaLayoutTag)
    throw ConfigError("theta snapshot '" + path + "' has layout tag '" + tag +
                      "', expected '" + kThetaLayoutTag + "'");
  CostateNet loaded = make_costate_net(std::stoi(in_dim), std::stoi(hidden),
                                       parse_activation(act), std::stoi(out_dim));
  for (int i = 0; i < loaded.param_count(); ++i) {
    if (!(in >> loaded.theta[i]))
      throw ConfigError("theta snapshot '" + path + "' truncated");
  }
  net = loaded;
}

}  // namespace noc
