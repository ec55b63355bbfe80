#include <doctest.h>

#include <cmath>
#include <vector>

#include "noc/errors.hpp"
#include "noc/lq_analytic.hpp"
#include "noc/rng.hpp"

using namespace noc;

namespace {

const LQParams kUnit{0.0, 1.0, 1.0, 1.0};

LQParams random_params(SplitMix64& rng) {
  return {rng.uniform_sym(2.0), 0.5 + rng.uniform(), 0.1 + rng.uniform(),
          0.1 + rng.uniform()};
}

}  // namespace

TEST_CASE("lq_hamiltonian closed form") {
  CHECK(lq_hamiltonian(0.0, 0.0, kUnit) == 0.0);
  // A=0,B=1,Q=1,R=1, x=1, rho=1: 1/2 - 1/2 + 0
  CHECK(lq_hamiltonian(1.0, 1.0, kUnit) == doctest::Approx(0.0).epsilon(1e-15));
  const LQParams p{2.0, 3.0, 4.0, 5.0};
  CHECK(lq_hamiltonian(1.5, -0.5, p) ==
        doctest::Approx(0.5 * 4 * 2.25 - 9 * 0.25 / 10.0 + 2 * 1.5 * -0.5)
            .epsilon(1e-15));
}

TEST_CASE("lq_hamilton_rhs") {
  const LQDeriv at_origin = lq_hamilton_rhs(0.0, 0.0, kUnit);
  CHECK(at_origin.x_dot == 0.0);
  CHECK(at_origin.p_dot == 0.0);

  const LQDeriv d = lq_hamilton_rhs(1.0, 0.0, kUnit);
  CHECK(d.x_dot == doctest::Approx(0.0));
  CHECK(d.p_dot == doctest::Approx(-1.0));

  SUBCASE("forward flow grows at rate omega = sqrt(A^2 + B^2 Q / R)") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 3; ++trial) {
      const LQParams p = random_params(rng);
      const double omega =
          std::sqrt(p.A * p.A + p.B * p.B * p.Q / p.R);
      const double horizon = 10.0 / omega;
      const int steps = 2000;
      const auto flow = lq_hamilton_flow_rk4(0.3 + rng.uniform(),
                                             rng.uniform_sym(0.5),
                                             horizon / steps, steps, p);
      const double rate = fit_growth_rate(flow);
      CHECK(std::abs(rate - omega) / omega < 0.05);
    }
  }
}

TEST_CASE("riccati right-hand sides") {
  CHECK(lq_riccati_rhs(0.0, kUnit) == doctest::Approx(-1.0));
  CHECK(lq_time_reversed_rhs(0.0, kUnit) == doctest::Approx(1.0));
  CHECK(lq_riccati_rhs(1.0, kUnit) == doctest::Approx(0.0));  // fixed point

  SplitMix64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const LQParams p = random_params(rng);
    const double theta = rng.uniform_sym(3.0);
    CHECK(lq_riccati_rhs(theta, p) + lq_time_reversed_rhs(theta, p) == 0.0);
  }
}

TEST_CASE("lq_closed_form") {
  CHECK(lq_closed_form(0.0, kUnit) == doctest::Approx(0.0));

  SUBCASE("unit parameters reduce to tanh") {
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 1e4}) {
      CHECK(lq_closed_form(s, kUnit) ==
            doctest::Approx(std::tanh(s)).epsilon(1e-12));
    }
  }

  SUBCASE("large s approaches the asymptote") {
    CHECK(std::abs(lq_closed_form(20.0, kUnit) - lq_asymptote(kUnit)) < 1e-6);
    SplitMix64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      const LQParams p = random_params(rng);
      const double l1 =
          p.A + std::sqrt(p.A * p.A + p.Q * p.B * p.B / p.R);
      CHECK(std::abs(lq_closed_form(20.0 / l1, p) - lq_asymptote(p)) < 1e-6);
    }
  }

  SUBCASE("negative s rejected") {
    CHECK_THROWS_AS(lq_closed_form(-1.0, kUnit), DomainError);
  }
}

TEST_CASE("lq_asymptote") {
  CHECK(lq_asymptote(kUnit) == doctest::Approx(1.0));
  LQParams bad = kUnit;
  bad.Q = 0.0;
  CHECK_THROWS_AS(lq_asymptote(bad), ConfigError);
  bad = kUnit;
  bad.R = 0.0;
  CHECK_THROWS_AS(lq_asymptote(bad), ConfigError);
  bad = kUnit;
  bad.B = 0.0;
  CHECK_THROWS_AS(lq_asymptote(bad), ConfigError);
}

TEST_CASE("hamilton flow conserves the Hamiltonian under RK4") {
  const auto flow = lq_hamilton_flow_rk4(1.0, 0.0, 0.01, 1000, kUnit);
  const double h0 = lq_hamiltonian(1.0, 0.0, kUnit);
  REQUIRE(h0 == doctest::Approx(0.5));
  for (const LQPoint& pt : flow) {
    CHECK(std::abs(lq_hamiltonian(pt.x, pt.p, kUnit) - h0) / std::abs(h0) <
          1e-6);
  }
}

TEST_CASE("closed form satisfies the time-reversed ODE") {
  // numerical differentiation of theta_hat vs the time-reversed RHS
  SplitMix64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const LQParams p = random_params(rng);
    for (double s : {0.3, 1.0, 2.5}) {
      const double h = 1e-5;
      const double deriv =
          (lq_closed_form(s + h, p) - lq_closed_form(s - h, p)) / (2 * h);
      const double rhs = lq_time_reversed_rhs(lq_closed_form(s, p), p);
      CHECK(std::abs(deriv - rhs) < 1e-7 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("time-reversed flow from zero is monotone when A = 0") {
  double theta = 0.0;
  double prev = theta;
  for (int k = 0; k < 2000; ++k) {
    theta += 0.01 * lq_time_reversed_rhs(theta, kUnit);
    CHECK(theta >= prev);
    CHECK(theta <= lq_asymptote(kUnit) + 1e-12);
    prev = theta;
  }
}

TEST_CASE("lq_forward_flow_bridge") {
  SUBCASE("stationary at the stable fixed point") {
    const double star = lq_asymptote(kUnit);
    const LQBridgeResult flow = lq_forward_flow_bridge(kUnit, star, 0.01, 500);
    for (double th : flow.theta) CHECK(std::abs(th - star) < 1e-10);
  }

  SUBCASE("tanh oracle: unit params, theta0 = 0") {
    const int n = 3000;
    const double tau = 0.01;
    const LQBridgeResult flow = lq_forward_flow_bridge(kUnit, 0.0, tau, n);
    REQUIRE(flow.theta.size() == std::size_t(n + 1));

    // independent Euler on theta' = 1 - theta^2 with plain arithmetic
    double theta = 0.0;
    for (int k = 0; k < n; ++k) {
      theta += tau * (1.0 - theta * theta);
      CHECK(std::abs(flow.theta[k + 1] - theta) < 1e-9);
    }
    CHECK(std::abs(flow.theta.back() - 1.0) < 1e-3);
  }

  SUBCASE("per-step delta equals the Riccati RHS") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 3; ++trial) {
      const LQParams p = random_params(rng);
      const double l1 = p.A + std::sqrt(p.A * p.A + p.Q * p.B * p.B / p.R);
      const double theta_max = std::abs(l1) * p.R / (p.B * p.B) + 1.0;
      const double tau = 0.1 * p.R / (p.B * p.B * theta_max);
      const LQBridgeResult flow = lq_forward_flow_bridge(p, 0.0, tau, 400);
      for (int k = 0; k < 400; ++k) {
        CHECK(std::abs(flow.delta[k] - lq_riccati_rhs(flow.theta[k], p)) <
              1e-8);
      }
    }
  }

  SUBCASE("divergence carries the step index") {
    // tau far beyond the stability bound blows up
    try {
      lq_forward_flow_bridge(kUnit, 5.0, 10.0, 10000);
      FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
      CHECK(e.step >= 0);
    }
  }
}
