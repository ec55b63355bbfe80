#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "noc/costate_net.hpp"
#include "noc/errors.hpp"
#include "noc/rng.hpp"

using namespace noc;

namespace {

Eigen::VectorXd random_vec(SplitMix64& rng, int n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform_sym(scale);
  return v;
}

// Independent forward pass: plain loops straight over the packed theta.
std::vector<double> mu_forward_reference(const CostateNet& net,
                                         const std::vector<double>& z) {
  const int h = net.hidden_width, in = net.input_dim, n = net.output_dim;
  std::vector<double> hidden(h), out(n);
  for (int r = 0; r < h; ++r) {
    double a = net.theta[net.c1_offset() + r];
    for (int c = 0; c < in; ++c)
      a += net.theta[net.w1_offset() + r * in + c] * z[c];
    hidden[r] = activation_value(net.hidden_activation, a);
  }
  for (int i = 0; i < n; ++i) {
    double p = net.theta[net.c2_offset() + i];
    for (int r = 0; r < h; ++r)
      p += net.theta[net.w2_offset() + i * h + r] * hidden[r];
    out[i] = p;
  }
  return out;
}

// Resample x until every relu pre-activation stays away from the kink.
Eigen::VectorXd kink_excluded_input(const CostateNet& net, SplitMix64& rng,
                                    double margin = 1e-3) {
  const ThetaBlocks b = unpack_theta(net);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Eigen::VectorXd x = random_vec(rng, net.input_dim);
    const Eigen::VectorXd a = b.W1 * x + b.c1;
    if (a.cwiseAbs().minCoeff() > margin) return x;
  }
  FAIL("could not find a kink-excluded input");
  return {};
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("mu_forward: zero parameters give zero costate") {
  CostateNet net = make_costate_net(4, 6, Activation::Tanh, 4);
  SplitMix64 rng(1);
  CHECK(mu_forward(net, random_vec(rng, 4), {}).isZero(0.0));
}

TEST_CASE("mu_forward: scalar composition by hand") {
  CostateNet net = make_costate_net(1, 1, Activation::Linear, 1);
  Eigen::MatrixXd W1(1, 1), W2(1, 1);
  Eigen::VectorXd c1(1), c2(1);
  W1 << 2.0;
  c1 << 0.0;
  W2 << 3.0;
  c2 << 1.0;
  net.theta = pack_theta(W1, c1, W2, c2);
  Eigen::VectorXd x(1);
  x << 0.5;
  CHECK(mu_forward(net, x, {})[0] == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("mu_forward matches an independent plain-loop oracle") {
  SplitMix64 rng(2);
  for (Activation act : {Activation::Tanh, Activation::Relu, Activation::Linear}) {
    CostateNet net = make_costate_net(5, 9, act, 7);
    init_theta(net, rng.next(), 1.0, true);
    const Eigen::VectorXd x = random_vec(rng, 5);
    const Eigen::VectorXd p = mu_forward(net, x, {});
    const std::vector<double> ref =
        mu_forward_reference(net, {x.data(), x.data() + x.size()});
    for (int i = 0; i < 7; ++i)
      CHECK(std::abs(p[i] - ref[i]) < 1e-12);
  }
}

TEST_CASE("mu_forward with input enrichment concatenates (x, u)") {
  SplitMix64 rng(3);
  CostateNet net = make_costate_net(6, 4, Activation::Tanh, 4);
  init_theta(net, rng.next(), 1.0, true);
  const Eigen::VectorXd x = random_vec(rng, 4);
  const Eigen::VectorXd u = random_vec(rng, 2);
  Eigen::VectorXd z(6);
  z << x, u;
  const std::vector<double> ref =
      mu_forward_reference(net, {z.data(), z.data() + 6});
  const Eigen::VectorXd p = mu_forward(net, x, u);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(p[i] - ref[i]) < 1e-12);

  CHECK_THROWS_AS(mu_forward(net, x, {}), ConfigError);
  CHECK_THROWS_AS(mu_forward(net, random_vec(rng, 5), u), ConfigError);
}

TEST_CASE("mu_jacobian_x: zero net, linear net, finite differences") {
  SplitMix64 rng(4);

  SUBCASE("zero parameters give a zero jacobian") {
    CostateNet net = make_costate_net(3, 5, Activation::Tanh, 3);
    CHECK(mu_jacobian_x(net, random_vec(rng, 3), {}).isZero(0.0));
  }

  SUBCASE("linear hidden activation gives the constant W2*W1") {
    CostateNet net = make_costate_net(3, 5, Activation::Linear, 3);
    init_theta(net, 77, 1.0, true);
    const ThetaBlocks b = unpack_theta(net);
    const Eigen::MatrixXd expected = b.W2 * b.W1;
    for (int trial = 0; trial < 3; ++trial) {
      const Eigen::MatrixXd j = mu_jacobian_x(net, random_vec(rng, 3), {});
      CHECK((j - expected).lpNorm<Eigen::Infinity>() < 1e-14);
    }
  }

  SUBCASE("central finite differences, kink-excluded for relu") {
    for (Activation act : {Activation::Tanh, Activation::Relu}) {
      CostateNet net = make_costate_net(4, 8, act, 4);
      init_theta(net, rng.next(), 1.0, true);
      const Eigen::VectorXd x = kink_excluded_input(net, rng);
      const Eigen::MatrixXd j = mu_jacobian_x(net, x, {});
      const double h = 1e-5;
      for (int c = 0; c < 4; ++c) {
        Eigen::VectorXd xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const Eigen::VectorXd fd =
            (mu_forward(net, xp, {}) - mu_forward(net, xm, {})) / (2 * h);
        for (int r = 0; r < 4; ++r) CHECK(rel_err(j(r, c), fd[r]) < 1e-5);
      }
    }
  }
}

TEST_CASE("mu_jacobian_theta: structure and finite differences") {
  SplitMix64 rng(5);

  SUBCASE("output-bias block is the identity") {
    CostateNet net = make_costate_net(3, 4, Activation::Tanh, 3);
    init_theta(net, rng.next(), 1.0, true);
    const Eigen::MatrixXd j = mu_jacobian_theta(net, random_vec(rng, 3), {});
    for (int i = 0; i < 3; ++i)
      for (int r = 0; r < 3; ++r)
        CHECK(j(i, net.c2_offset() + r) == (i == r ? 1.0 : 0.0));
  }

  SUBCASE("x = 0 with zero hidden bias kills the W2 block") {
    CostateNet net = make_costate_net(3, 4, Activation::Tanh, 3);
    init_theta(net, rng.next(), 1.0, false);  // biases zero
    const Eigen::MatrixXd j =
        mu_jacobian_theta(net, Eigen::VectorXd::Zero(3), {});
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 3 * 4; ++c) CHECK(j(i, net.w2_offset() + c) == 0.0);
  }

  SUBCASE("central finite differences over all of theta") {
    for (Activation act : {Activation::Tanh, Activation::Relu}) {
      CostateNet net = make_costate_net(3, 5, act, 3);
      init_theta(net, rng.next(), 1.0, true);
      const Eigen::VectorXd x = kink_excluded_input(net, rng);
      const Eigen::MatrixXd j = mu_jacobian_theta(net, x, {});
      const double h = 1e-5;
      for (int c = 0; c < net.param_count(); ++c) {
        CostateNet np = net, nm = net;
        np.theta[c] += h;
        nm.theta[c] -= h;
        const Eigen::VectorXd fd =
            (mu_forward(np, x, {}) - mu_forward(nm, x, {})) / (2 * h);
        for (int r = 0; r < 3; ++r) CHECK(rel_err(j(r, c), fd[r]) < 1e-5);
      }
    }
  }
}

TEST_CASE("jacobian-vector products converge at order 2") {
  SplitMix64 rng(6);
  CostateNet net = make_costate_net(4, 6, Activation::Tanh, 4);
  init_theta(net, rng.next(), 1.0, true);
  const Eigen::VectorXd x = random_vec(rng, 4);
  const Eigen::VectorXd v = random_vec(rng, net.param_count());
  const Eigen::VectorXd jv = mu_jacobian_theta(net, x, {}) * v;

  auto fd_error = [&](double h) {
    CostateNet np = net, nm = net;
    np.theta += h * v;
    nm.theta -= h * v;
    const Eigen::VectorXd fd =
        (mu_forward(np, x, {}) - mu_forward(nm, x, {})) / (2 * h);
    return (fd - jv).norm();
  };
  const double e1 = fd_error(1e-3);
  const double e2 = fd_error(5e-4);
  REQUIRE(e2 > 0.0);
  const double order = std::log2(e1 / e2);  // halving h divides error by 2^order
  CHECK(order == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("theta packing round-trips") {
  SplitMix64 rng(8);
  CostateNet net = make_costate_net(4, 3, Activation::Relu, 5);
  init_theta(net, rng.next(), 1.0, true);
  const ThetaBlocks b = unpack_theta(net);
  CHECK(pack_theta(b.W1, b.c1, b.W2, b.c2) == net.theta);
  CHECK(net.param_count() == 3 * 4 + 3 + 5 * 3 + 5);
}

TEST_CASE("init_theta respects the per-layer fan-in scale") {
  CostateNet net = make_costate_net(16, 9, Activation::Tanh, 4);
  init_theta(net, 123, 1.0, false);
  const ThetaBlocks b = unpack_theta(net);
  CHECK(b.c1.isZero(0.0));
  CHECK(b.c2.isZero(0.0));
  CHECK(b.W1.cwiseAbs().maxCoeff() <= 1.0 / 4.0);
  CHECK(b.W2.cwiseAbs().maxCoeff() <= 1.0 / 3.0);
  CHECK(b.W1.cwiseAbs().maxCoeff() > 0.0);

  // seeded determinism
  CostateNet net2 = make_costate_net(16, 9, Activation::Tanh, 4);
  init_theta(net2, 123, 1.0, false);
  CHECK(net.theta == net2.theta);
}

TEST_CASE("theta snapshots round-trip through CSV") {
  namespace fs = std::filesystem;
  SplitMix64 rng(9);
  CostateNet net = make_costate_net(5, 4, Activation::Tanh, 5);
  init_theta(net, rng.next(), 1.0, true);
  const fs::path path = fs::temp_directory_path() / "noc_theta_test.csv";
  save_theta_csv(path.string(), net);
  CostateNet loaded;
  load_theta_csv(path.string(), loaded);
  CHECK(loaded.input_dim == net.input_dim);
  CHECK(loaded.hidden_width == net.hidden_width);
  CHECK(loaded.hidden_activation == net.hidden_activation);
  CHECK(loaded.output_dim == net.output_dim);
  CHECK((loaded.theta - net.theta).lpNorm<Eigen::Infinity>() < 1e-15);
  fs::remove(path);
}
