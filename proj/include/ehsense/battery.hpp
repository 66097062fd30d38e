// ============================================================================
// battery.hpp -- Battery charge Markov chain of an energy harvesting sensor
//
// The battery holds 0..K unit energy packets.  Per interval at most one packet
// arrives (Bernoulli p_e) and at most one is consumed (a transmission, which
// happens with probability q = pi0*q0 + pi1*q1 when the battery is non-empty).
// The charge state is a tridiagonal birth-death chain; this module builds the
// transition matrix, solves for its stationary distribution, and evaluates the
// closed-form depletion probability together with its infinite-capacity limit.
// ============================================================================
#pragma once

#include <Eigen/Dense>
#include <limits>

namespace ehsense {

struct BatteryParams {
  static constexpr int kInfiniteCapacity = -1;

  int capacity = 1;   // K, in packets; kInfiniteCapacity for unbounded
  double pe = 0.0;    // Pr(one packet harvested per interval)
  double q = 0.0;     // Pr(intended transmission per interval)

  [[nodiscard]] bool infinite() const { return capacity == kInfiniteCapacity; }
};

void validate(const BatteryParams& p);

// The (K+1)-state chain stored by diagonals; states change by at most one per
// interval.  `steady` is the stationary distribution.
struct BatteryChain {
  BatteryParams params;
  Eigen::VectorXd diag;    // P(k, k),   size K+1
  Eigen::VectorXd upper;   // P(k, k+1), size K
  Eigen::VectorXd lower;   // P(k+1, k), size K
  Eigen::VectorXd steady;  // stationary probabilities, size K+1

  [[nodiscard]] Eigen::MatrixXd dense_matrix() const;
};

/// Build the chain for finite K and solve its stationary distribution.
BatteryChain build_chain(const BatteryParams& params);

/// Stationary distribution of the chain (the vector cached in `chain`).
const Eigen::VectorXd& steady_state(const BatteryChain& chain);

/// Steady-state probability of an empty battery.  Finite K uses the
/// geometric-sum closed form with its Omega = 1 limit; infinite K returns
/// 0 when p_e >= q and 1 - p_e/q otherwise.
double depletion_probability(const BatteryParams& params);

/// Omega = p_e (1-q) / (q (1-p_e)), the chain's geometric ratio.
double battery_omega(const BatteryParams& params);

/// Algebraically equivalent ratio form of the finite-K depletion probability,
/// (p_e - q) / (p_e Omega^K - q).  Defined only for p_e != q; large Omega^K is
/// handled in log space.
double depletion_probability_ratio_form(const BatteryParams& params);

}  // namespace ehsense
