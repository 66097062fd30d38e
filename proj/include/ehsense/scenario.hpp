// ============================================================================
// scenario.hpp -- JSON scenario files consumed by the command-line tool.
//
// A scenario file carries the prior, the sensor-to-FC channel, the sensor
// array (observation model, capacity, harvesting probability, optional fixed
// threshold) and optional sweep and simulation blocks.  Validation failures
// throw ScenarioError with a field path; the CLI maps them to exit code 2.
// ============================================================================
#pragma once

#include "ehsense/metrics.hpp"
#include "ehsense/sim.hpp"

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehsense {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SensorSpec {
  ObservationModel model;
  int capacity = 1;  // BatteryParams::kInfiniteCapacity for "inf"
  double pe = 0.0;
  std::optional<double> tau;
};

enum class SweepVariable { S, K, Tau, Pe };

struct SweepSpec {
  SweepVariable variable = SweepVariable::S;
  double from = 0.0;
  double to = 1.0;
  int points = 2;
};

struct SimSpec {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 10000;
  InitialBattery initial_battery = InitialBattery::Empty;
  int initial_level = 0;
};

struct ScenarioFile {
  double pi1 = 0.5;
  ChannelModel channel;
  std::vector<SensorSpec> sensors;
  std::optional<SweepSpec> sweep;
  std::optional<SimSpec> sim;
};

ScenarioFile parse_scenario(const nlohmann::json& doc);
ScenarioFile load_scenario(const std::string& path);

std::string to_string(SweepVariable v);

}  // namespace ehsense
