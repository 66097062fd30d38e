#include "ehsense/battery.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"

using namespace ehsense;

TEST_CASE("transition matrix entries, K = 1") {
  const BatteryChain chain = build_chain({1, 0.5, 0.5});
  const Eigen::MatrixXd P = chain.dense_matrix();
  CHECK(P(0, 0) == doctest::Approx(0.5));
  CHECK(P(0, 1) == doctest::Approx(0.5));
  CHECK(P(1, 0) == doctest::Approx(0.25));
  CHECK(P(1, 1) == doctest::Approx(0.75));
}

TEST_CASE("chain structure invariants") {
  for (int K : {1, 2, 5, 17}) {
    const BatteryChain chain = build_chain({K, 0.3, 0.4});
    const Eigen::MatrixXd P = chain.dense_matrix();
    for (int i = 0; i <= K; ++i) {
      CHECK(P.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (int j = 0; j <= K; ++j)
        if (std::abs(i - j) > 1) CHECK(P(i, j) == 0.0);
    }
    CHECK(chain.steady.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const Eigen::VectorXd residual = P.transpose() * chain.steady - chain.steady;
    CHECK(residual.lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("degenerate chains") {
  // No energy ever arrives: absorbed at 0.
  const BatteryChain dead = build_chain({2, 0.0, 0.7});
  CHECK(dead.steady(0) == doctest::Approx(1.0));
  CHECK(dead.steady(1) == 0.0);
  CHECK(dead.steady(2) == 0.0);

  // Energy every interval: state 0 unreachable in steady state.
  const BatteryChain full = build_chain({3, 1.0, 0.5});
  CHECK(full.steady(0) == 0.0);
}

TEST_CASE("steady state matches power iteration oracle") {
  const BatteryChain chain = build_chain({3, 0.3, 0.4});
  const Eigen::VectorXd ref = oracle::power_iteration_steady(chain.dense_matrix());
  CHECK((chain.steady - ref).lpNorm<Eigen::Infinity>() < 1e-11);
}

TEST_CASE("two-state chain hand solve") {
  const BatteryChain chain = build_chain({1, 0.5, 0.5});
  CHECK(chain.steady(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(chain.steady(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(depletion_probability({1, 0.5, 0.5}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("closed form equals linear solve on a parameter grid") {
  for (int K : {1, 2, 3, 5, 10, 25, 50, 100}) {
    for (double pe = 0.05; pe < 1.0; pe += 0.18) {
      for (double q = 0.05; q < 1.0; q += 0.18) {
        const BatteryParams params{K, pe, q};
        const BatteryChain chain = build_chain(params);
        CHECK(std::abs(depletion_probability(params) - chain.steady(0)) < 1e-10);
        // Per-state geometric formula p_k = Omega^k / (1-q) * p_0.
        const double omega = battery_omega(params);
        double factor = 1.0 / (1.0 - q);
        for (int k = 1; k <= K; ++k) {
          factor *= omega;
          CHECK(std::abs(chain.steady(k) - factor * chain.steady(0)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("both closed forms agree away from Omega = 1") {
  for (int K : {1, 4, 20, 200}) {
    for (double pe : {0.1, 0.3, 0.8}) {
      for (double q : {0.2, 0.5, 0.9}) {
        if (pe == q) continue;
        const BatteryParams params{K, pe, q};
        const double a = depletion_probability(params);
        const double b = depletion_probability_ratio_form(params);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("Omega = 1 limit") {
  CHECK(depletion_probability({2, 0.5, 0.5}) == doctest::Approx(0.2).epsilon(1e-13));
  // Approaching the limit continuously.
  CHECK(depletion_probability({2, 0.5, 0.5 + 1e-11}) ==
        doctest::Approx(0.2).epsilon(1e-8));
}

TEST_CASE("degenerate parameter rules") {
  CHECK(depletion_probability({5, 0.0, 0.4}) == 1.0);
  CHECK(depletion_probability({5, 1.0, 0.4}) == 0.0);
  CHECK(depletion_probability({5, 0.3, 0.0}) == 0.0);
  CHECK(depletion_probability({5, 0.0, 0.0}) == 1.0);
  CHECK(depletion_probability({BatteryParams::kInfiniteCapacity, 0.15, 0.15}) == 0.0);
  CHECK(depletion_probability({BatteryParams::kInfiniteCapacity, 0.15, 0.10}) == 0.0);
  CHECK(depletion_probability({BatteryParams::kInfiniteCapacity, 0.1, 0.2}) ==
        doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("monotonicity of the depletion probability") {
  // Non-increasing in K.
  double prev = 1.0;
  for (int K = 1; K <= 60; ++K) {
    const double p0 = depletion_probability({K, 0.3, 0.4});
    CHECK(p0 <= prev + 1e-14);
    prev = p0;
  }
  // Non-increasing in pe, non-decreasing in q.
  prev = 1.0;
  for (double pe = 0.02; pe <= 0.98; pe += 0.02) {
    const double p0 = depletion_probability({4, pe, 0.4});
    CHECK(p0 <= prev + 1e-14);
    prev = p0;
  }
  prev = 0.0;
  for (double q = 0.02; q <= 0.98; q += 0.02) {
    const double p0 = depletion_probability({4, 0.3, q});
    CHECK(p0 >= prev - 1e-14);
    prev = p0;
  }
}

TEST_CASE("finite capacity converges to the infinite limit") {
  // pe < q: p0 -> 1 - pe/q.
  CHECK(depletion_probability({10000, 0.1, 0.3}) ==
        doctest::Approx(1.0 - 0.1 / 0.3).epsilon(1e-6));
  // pe > q with margin: p0 -> 0.
  CHECK(depletion_probability({10000, 0.35, 0.3}) < 1e-6);
}

TEST_CASE("large capacity solve stays O(K) and finite") {
  const BatteryChain chain = build_chain({100000, 0.4, 0.3});
  CHECK(chain.steady.sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(chain.steady(0) >= 0.0);
  CHECK(std::abs(chain.steady(0) - depletion_probability({100000, 0.4, 0.3})) < 1e-10);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(build_chain({BatteryParams::kInfiniteCapacity, 0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(depletion_probability({0, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(depletion_probability({1, 1.5, 0.5}), std::invalid_argument);
}
