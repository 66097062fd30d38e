// ============================================================================
// network.hpp -- Exact evaluation of an N-sensor parallel network.
//
// Conditioned on the hypothesis, the FC inputs are independent Bernoulli
// variables, so the joint law over {0,1}^N is a product.  The MAP error
// probability and the total Bhattacharyya distance are computed by exact
// enumeration; N is capped at 24.
// ============================================================================
#pragma once

#include "ehsense/metrics.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ehsense {

struct NetworkScenario {
  double pi1 = 0.5;
  std::vector<SensorDesign> sensors;
};

inline constexpr int kMaxExactSensors = 24;

void validate(const NetworkScenario& scenario);

/// Pr(y | h) for every outcome vector; entry i corresponds to the vector whose
/// n-th component is bit n of i.  Sums to 1.
Eigen::VectorXd joint_pmf(const NetworkScenario& scenario, int hypothesis);

/// Exact Bayesian error probability of the MAP fusion rule,
/// 1 - sum_y max_j pi_j Pr(y|j).
double map_error_probability(const NetworkScenario& scenario);

/// MAP decision per outcome vector (ties resolved toward h = 0); entry i is
/// the decision for outcome index i.
std::vector<std::uint8_t> map_decision_table(const NetworkScenario& scenario);

/// Sum of per-sensor constrained BDs; equals the BD of the joint laws.
double total_bd(const NetworkScenario& scenario);

}  // namespace ehsense
