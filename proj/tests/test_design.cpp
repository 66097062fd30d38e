#include "ehsense/design.hpp"

#include <doctest.h>

#include <cmath>

using namespace ehsense;

namespace {

const ChannelModel kNoisy{0.1, 0.2};
const ChannelModel kClean{0.0, 0.0};

}  // namespace

TEST_CASE("separable table entry attains the upper bound") {
  TailTable table;
  table.tau = {0.0, 1.0, 2.0};
  table.tails = {{1.0, 1.0}, {0.0, 1.0}, {0.0, 0.2}};
  const GridSpec grid;
  const DesignResult r = optimize_constrained(table, 2, 0.15, 0.2, kNoisy, grid);
  CHECK(r.tau_star == doctest::Approx(1.0));
  CHECK(r.q0 == 0.0);
  CHECK(r.q1 == 1.0);
  CHECK(r.bd_at_star ==
        doctest::Approx(bd_upper_bound(2, 0.15, 0.2, kNoisy)).epsilon(1e-12));
}

TEST_CASE("uninformative model raises the degenerate-objective signal") {
  TailTable flat;
  flat.tau = {0.0, 1.0};
  flat.tails = {{0.5, 0.5}, {0.1, 0.1}};
  CHECK_THROWS_AS(optimize_constrained(flat, 1, 0.15, 0.2, kNoisy, GridSpec{}),
                  DegenerateObjectiveError);
  // s = 0 makes q0 == q1 everywhere.
  CHECK_THROWS_AS(optimize_unconstrained(RayleighRician{0.0, 1.0, 1.0}, 0.2,
                                         kNoisy, GridSpec{}),
                  DegenerateObjectiveError);
}

TEST_CASE("separable table over a perfect channel yields unbounded BD") {
  TailTable table;
  table.tau = {0.0, 1.0};
  table.tails = {{1.0, 1.0}, {0.0, 1.0}};
  const DesignResult r = optimize_unconstrained(table, 0.2, kClean, GridSpec{});
  CHECK(std::isinf(r.bd_at_star));
}

TEST_CASE("finer exhaustive grid cannot improve the refined optimum") {
  const RayleighRician model{5.0, 1.0, 1.0};
  GridSpec grid = default_grid(model);

  const DesignResult c = optimize_constrained(model, 1, 0.15, 0.2, kNoisy, grid);
  const DesignResult u = optimize_unconstrained(model, 0.2, kNoisy, grid);

  double best_c = 0.0, best_u = 0.0;
  const int fine = 40960;
  for (int i = 0; i <= fine; ++i) {
    const double tau = grid.tau_max * i / fine;
    best_c = std::max(best_c,
                      constrained_bd(make_sensor_design(model, tau, 1, 0.15,
                                                        kNoisy, 0.2),
                                     0.2));
    const TailPair t = tail_probabilities(model, tau);
    best_u = std::max(best_u, unconstrained_bd(t.q0, t.q1, kNoisy));
  }
  CHECK(c.bd_at_star >= best_c - 1e-8);
  CHECK(u.bd_at_star >= best_u - 1e-8);
}

TEST_CASE("refinement rounds never lose ground") {
  const RayleighRician model{5.0, 1.0, 1.0};
  GridSpec grid = default_grid(model);
  grid.points = 257;
  double prev = -1.0;
  for (int rounds = 0; rounds <= 4; ++rounds) {
    grid.refinement_rounds = rounds;
    const DesignResult r = optimize_constrained(model, 1, 0.15, 0.2, kNoisy, grid);
    CHECK(r.bd_at_star >= prev - 1e-15);
    prev = r.bd_at_star;
  }
}

TEST_CASE("adapted threshold dominates the unconstrained one in its objective") {
  for (double s : {1.0, 3.0, 5.0, 8.0, 10.0}) {
    const RayleighRician model{s, 1.0, 1.0};
    const GridSpec grid = default_grid(model);
    for (int K : {1, 2}) {
      for (const ChannelModel& ch : {kClean, kNoisy}) {
        const DesignResult adapted =
            optimize_constrained(model, K, 0.15, 0.2, ch, grid);
        const DesignResult unconstrained =
            optimize_unconstrained(model, 0.2, ch, grid);
        const double bd_at_u = constrained_bd(
            make_sensor_design(model, unconstrained.tau_star, K, 0.15, ch, 0.2),
            0.2);
        CHECK(adapted.bd_at_star >= bd_at_u - 1e-12);
        // Energy-aware design acts more conservatively.
        CHECK(adapted.tau_star >= unconstrained.tau_star - 1e-9);
      }
    }
  }
}

TEST_CASE("curve is the coarse grid and the star dominates it") {
  const RayleighRician model{5.0, 1.0, 1.0};
  const GridSpec grid = default_grid(model);
  const DesignResult r = optimize_constrained(model, 2, 0.15, 0.2, kNoisy, grid);
  CHECK(static_cast<int>(r.curve.size()) == grid.points);
  for (const auto& [tau, bd] : r.curve) CHECK(r.bd_at_star >= bd - 1e-15);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(validate(GridSpec{3.0, 1.0, 100, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(GridSpec{0.0, 1.0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(GridSpec{0.0, 1.0, 16, -1}), std::invalid_argument);
}
