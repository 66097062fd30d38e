// ============================================================================
// metrics.hpp -- Bhattacharyya distance of a sensor as seen by the fusion
// center, with the binary asymmetric channel and battery depletion folded in.
//
// The sensor output u in {0,1} passes through a BAC flipping 0->1 with
// probability eps0 and 1->0 with probability eps1.  With depletion probability
// p0, Pr(y=1 | h) = eps0 + delta * q_h * (1 - p0) where delta = 1-eps0-eps1.
// An unbounded distance (disjoint supports) is represented by +infinity.
// ============================================================================
#pragma once

#include "ehsense/battery.hpp"
#include "ehsense/observation.hpp"

#include <utility>

namespace ehsense {

struct ChannelModel {
  double eps0 = 0.0;  // Pr(0 -> 1)
  double eps1 = 0.0;  // Pr(1 -> 0)

  [[nodiscard]] double delta() const { return 1.0 - eps0 - eps1; }
};

void validate(const ChannelModel& ch);

// One sensor's full parameterization with cached derived quantities.
struct SensorDesign {
  ObservationModel model;
  double tau = 0.0;
  int capacity = 1;  // BatteryParams::kInfiniteCapacity for unbounded
  double pe = 0.0;
  ChannelModel channel;

  // Filled by make_sensor_design; consistent with (tau, prior, battery).
  TailPair tails;
  double q = 0.0;   // pi0 q0 + pi1 q1
  double p0 = 0.0;  // steady-state depletion probability
};

SensorDesign make_sensor_design(const ObservationModel& model, double tau,
                                int capacity, double pe,
                                const ChannelModel& channel, double pi1);

/// Bernoulli parameters (Pr(y=1|H0), Pr(y=1|H1)) at the FC input.
std::pair<double, double> channel_output_pmf(double q0, double q1, double p0,
                                             const ChannelModel& ch);

/// BD between two Bernoulli laws: -ln[sqrt(a b) + sqrt((1-a)(1-b))].
double bhattacharyya(double py1_given_h0, double py1_given_h1);

/// BD of a designed sensor at the FC input, with steady-state depletion.
double constrained_bd(const SensorDesign& design, double pi1);

/// BD with energy always available (p0 forced to 0).
double unconstrained_bd(double q0, double q1, const ChannelModel& ch);

/// Capacity-dependent ceiling on the constrained BD, attained by a separable
/// observation model (q0 = 0, q1 = 1).  +infinity only for infinite capacity
/// with p_e >= pi1 over a noiseless channel.
double bd_upper_bound(int capacity, double pe, double pi1,
                      const ChannelModel& ch);

/// Error probability bound sqrt(pi0 pi1) exp(-B_total), clamped to
/// [0, min(pi0, pi1)].
double kailath_bound(double b_total, double pi1);

}  // namespace ehsense
