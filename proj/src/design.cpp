#include "ehsense/design.hpp"

#include <algorithm>
#include <cmath>

namespace ehsense {

namespace {

struct Evaluation {
  double tau = 0.0;
  double bd = 0.0;
};

template <typename Objective>
Evaluation best_on_grid(const std::vector<double>& taus, Objective&& f,
                        std::vector<std::pair<double, double>>* curve) {
  Evaluation best{taus.front(), -1.0};
  for (double tau : taus) {
    const double bd = f(tau);
    if (curve) curve->emplace_back(tau, bd);
    if (bd >= best.bd) best = {tau, bd};  // ties break toward larger tau
  }
  return best;
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return out;
}

template <typename Objective>
DesignResult run_grid_search(const ObservationModel& model,
                             const GridSpec& grid, Objective&& f) {
  validate(grid);
  DesignResult result;

  std::vector<double> taus;
  bool refine = true;
  if (const auto* table = std::get_if<TailTable>(&model)) {
    taus = table->tau;  // discrete model: candidates are the table entries
    refine = false;
  } else {
    taus = linspace(grid.tau_min, grid.tau_max, grid.points);
  }

  Evaluation best = best_on_grid(taus, f, &result.curve);
  if (best.bd <= 0.0) {
    const bool all_zero = std::all_of(
        result.curve.begin(), result.curve.end(),
        [](const auto& sample) { return sample.second <= 0.0; });
    if (all_zero)
      throw DegenerateObjectiveError("BD objective is zero across the grid");
  }

  if (refine) {
    double step = (grid.tau_max - grid.tau_min) / (grid.points - 1);
    for (int round = 0; round < grid.refinement_rounds; ++round) {
      const double lo = std::max(grid.tau_min, best.tau - step);
      const double hi = std::min(grid.tau_max, best.tau + step);
      const Evaluation refined =
          best_on_grid(linspace(lo, hi, grid.points), f, nullptr);
      if (refined.bd >= best.bd) best = refined;
      step = (hi - lo) / (grid.points - 1);
    }
  }

  result.tau_star = best.tau;
  result.bd_at_star = best.bd;
  return result;
}

}  // namespace

void validate(const GridSpec& g) {
  if (!(g.tau_min < g.tau_max))
    throw std::invalid_argument("grid requires tau_min < tau_max");
  if (g.points < 2) throw std::invalid_argument("grid requires >= 2 points");
  if (g.refinement_rounds < 0)
    throw std::invalid_argument("refinement_rounds must be >= 0");
}

GridSpec default_grid(const ObservationModel& model) {
  GridSpec g;
  if (const auto* rr = std::get_if<RayleighRician>(&model)) {
    g.tau_max = std::max(12.0, rr->s + 6.0 * rr->sigma1);
  }
  return g;
}

DesignResult optimize_constrained(const ObservationModel& model, int capacity,
                                  double pe, double pi1,
                                  const ChannelModel& ch,
                                  const GridSpec& grid) {
  DesignResult result = run_grid_search(model, grid, [&](double tau) {
    return constrained_bd(
        make_sensor_design(model, tau, capacity, pe, ch, pi1), pi1);
  });
  const SensorDesign d =
      make_sensor_design(model, result.tau_star, capacity, pe, ch, pi1);
  result.q0 = d.tails.q0;
  result.q1 = d.tails.q1;
  result.p0 = d.p0;
  return result;
}

DesignResult optimize_unconstrained(const ObservationModel& model, double pi1,
                                    const ChannelModel& ch,
                                    const GridSpec& grid) {
  (void)pi1;  // the unconstrained objective does not involve the prior
  DesignResult result = run_grid_search(model, grid, [&](double tau) {
    const TailPair t = tail_probabilities(model, tau);
    return unconstrained_bd(t.q0, t.q1, ch);
  });
  const TailPair t = tail_probabilities(model, result.tau_star);
  result.q0 = t.q0;
  result.q1 = t.q1;
  result.p0 = 0.0;
  return result;
}

}  // namespace ehsense
