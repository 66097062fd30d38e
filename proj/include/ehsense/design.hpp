// ============================================================================
// design.hpp -- Grid-search selection of the sensor decision threshold.
//
// The threshold maximizing the delivered Bhattacharyya distance is found by
// evaluating the (energy-constrained or unconstrained) BD on a threshold grid,
// then re-gridding around the incumbent for a number of refinement rounds.
// Ties break toward the largest threshold.
// ============================================================================
#pragma once

#include "ehsense/metrics.hpp"

#include <stdexcept>
#include <vector>

namespace ehsense {

struct GridSpec {
  double tau_min = 0.0;
  double tau_max = 12.0;
  int points = 4096;
  int refinement_rounds = 3;
};

void validate(const GridSpec& g);

/// Grid covering both tails of the Rayleigh/Rician model; [0, max(12, s+6*sigma1)].
GridSpec default_grid(const ObservationModel& model);

struct DesignResult {
  double tau_star = 0.0;
  double bd_at_star = 0.0;
  double q0 = 0.0;
  double q1 = 0.0;
  double p0 = 0.0;
  std::vector<std::pair<double, double>> curve;  // coarse-grid (tau, BD) samples
};

// The BD objective is zero across the whole grid (uninformative model).
struct DegenerateObjectiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Threshold maximizing the energy-constrained BD.
DesignResult optimize_constrained(const ObservationModel& model, int capacity,
                                  double pe, double pi1,
                                  const ChannelModel& ch, const GridSpec& grid);

/// Threshold maximizing the BD with energy always available.
DesignResult optimize_unconstrained(const ObservationModel& model, double pi1,
                                    const ChannelModel& ch,
                                    const GridSpec& grid);

}  // namespace ehsense
