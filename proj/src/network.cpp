#include "ehsense/network.hpp"

#include <cmath>
#include <stdexcept>

namespace ehsense {

void validate(const NetworkScenario& scenario) {
  if (!(scenario.pi1 > 0.0 && scenario.pi1 < 1.0))
    throw std::invalid_argument("pi1 must lie in (0,1)");
  if (scenario.sensors.empty())
    throw std::invalid_argument("scenario needs at least one sensor");
  if (scenario.sensors.size() > static_cast<std::size_t>(kMaxExactSensors))
    throw std::invalid_argument("exact enumeration supports at most 24 sensors");
}

Eigen::VectorXd joint_pmf(const NetworkScenario& scenario, int hypothesis) {
  validate(scenario);
  const int n = static_cast<int>(scenario.sensors.size());
  std::vector<double> p1(n);
  for (int i = 0; i < n; ++i) {
    const SensorDesign& s = scenario.sensors[i];
    const auto [a, b] =
        channel_output_pmf(s.tails.q0, s.tails.q1, s.p0, s.channel);
    p1[i] = hypothesis == 0 ? a : b;
  }
  const std::int64_t size = std::int64_t{1} << n;
  Eigen::VectorXd pmf(size);
  for (std::int64_t y = 0; y < size; ++y) {
    double prob = 1.0;
    for (int i = 0; i < n; ++i) {
      prob *= (y >> i & 1) ? p1[i] : 1.0 - p1[i];
    }
    pmf(y) = prob;
  }
  return pmf;
}

double map_error_probability(const NetworkScenario& scenario) {
  const Eigen::VectorXd p0 = joint_pmf(scenario, 0);
  const Eigen::VectorXd p1 = joint_pmf(scenario, 1);
  const double pi0 = 1.0 - scenario.pi1;
  double correct = 0.0;
  for (Eigen::Index y = 0; y < p0.size(); ++y) {
    correct += std::max(pi0 * p0(y), scenario.pi1 * p1(y));
  }
  return std::max(0.0, 1.0 - correct);
}

std::vector<std::uint8_t> map_decision_table(const NetworkScenario& scenario) {
  const Eigen::VectorXd p0 = joint_pmf(scenario, 0);
  const Eigen::VectorXd p1 = joint_pmf(scenario, 1);
  const double pi0 = 1.0 - scenario.pi1;
  std::vector<std::uint8_t> table(static_cast<std::size_t>(p0.size()));
  for (Eigen::Index y = 0; y < p0.size(); ++y) {
    // Exact ties decide h = 0 so exported traces are deterministic.
    table[static_cast<std::size_t>(y)] =
        scenario.pi1 * p1(y) > pi0 * p0(y) ? 1 : 0;
  }
  return table;
}

double total_bd(const NetworkScenario& scenario) {
  validate(scenario);
  double sum = 0.0;
  for (const SensorDesign& s : scenario.sensors) {
    sum += constrained_bd(s, scenario.pi1);
  }
  return sum;
}

}  // namespace ehsense
