#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "noc/activation.hpp"

namespace noc {

// One-hidden-layer costate estimator
//   p = W2 * sigma(W1 * z + c1) + c2
// where z is the state x, optionally concatenated with the input signal u.
//
// theta packs, in this order:
//   W1 row-major (hidden x input), c1, W2 row-major (output x hidden), c2.
struct CostateNet {
  int input_dim = 0;
  int hidden_width = 0;
  Activation hidden_activation = Activation::Relu;
  int output_dim = 0;          // state dimension n
  Eigen::VectorXd theta;       // length param_count()

  int param_count() const {
    return hidden_width * input_dim + hidden_width +
           output_dim * hidden_width + output_dim;
  }
  int w1_offset() const { return 0; }
  int c1_offset() const { return hidden_width * input_dim; }
  int w2_offset() const { return c1_offset() + hidden_width; }
  int c2_offset() const { return w2_offset() + output_dim * hidden_width; }
};

CostateNet make_costate_net(int input_dim, int hidden_width,
                            Activation hidden_activation, int output_dim);

struct ThetaBlocks {
  Eigen::MatrixXd W1;  // hidden x input
  Eigen::VectorXd c1;  // hidden
  Eigen::MatrixXd W2;  // output x hidden
  Eigen::VectorXd c2;  // output
};

Eigen::VectorXd pack_theta(const Eigen::MatrixXd& W1, const Eigen::VectorXd& c1,
                           const Eigen::MatrixXd& W2, const Eigen::VectorXd& c2);
ThetaBlocks unpack_theta(const CostateNet& net);

// Weights uniform in [-gain/sqrt(fan_in), +gain/sqrt(fan_in)] per layer;
// biases zero unless uniform_biases, in which case they draw from the same
// range as their layer's weights.
void init_theta(CostateNet& net, std::uint64_t seed, double gain = 1.0,
                bool uniform_biases = false);

// u may be empty; it is consumed only when input_dim == x.size() + u.size().
Eigen::VectorXd mu_forward(const CostateNet& net, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u);

// d(mu)/dx, n x n; u columns (if any) are excluded.
Eigen::MatrixXd mu_jacobian_x(const CostateNet& net, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u);

// d(mu)/dtheta, n x M, columns in theta packing order.
Eigen::MatrixXd mu_jacobian_theta(const CostateNet& net, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u);

// Snapshot: one header line with a layout tag and the architecture, then one
// value per line in packing order.
void save_theta_csv(const std::string& path, const CostateNet& net);
void load_theta_csv(const std::string& path, CostateNet& net);

}  // namespace noc
