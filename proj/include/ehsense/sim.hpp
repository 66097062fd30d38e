// ============================================================================
// sim.hpp -- Discrete-time Monte Carlo simulator of the full system.
//
// Each battery evolves under its own independent prior-mixture transmission
// process, so the joint battery state stays a product of the per-sensor
// stationary chains.  Each step additionally draws a fresh hypothesis and,
// conditioned on it and on the current battery gates, the channel outputs
// scored by the precomputed MAP rule at the FC; the time average of those
// scores estimates the stationary one-shot error of the analytic product-form
// network law.  Every (sensor, purpose) pair owns an independent RNG stream
// derived from the master seed, so changing one sensor's parameters leaves
// the other sample paths untouched.  Runs are bit-reproducible for a fixed
// seed.
// ============================================================================
#pragma once

#include "ehsense/network.hpp"

#include <nlohmann/json_fwd.hpp>
#include <cstdint>
#include <vector>

namespace ehsense {

enum class InitialBattery { Empty, Full, Level };

struct SimConfig {
  NetworkScenario scenario;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 10000;
  InitialBattery initial_battery = InitialBattery::Empty;
  int initial_level = 0;  // used when initial_battery == Level
};

void validate(const SimConfig& config);

struct SensorStats {
  std::vector<double> battery_histogram;  // normalized, size K+1
  double depletion_frequency = 0.0;       // empirical Pr(b_t = 0)
  double py1_given_h0 = 0.0;              // empirical Pr(y=1 | H0)
  double py1_given_h1 = 0.0;              // empirical Pr(y=1 | H1)
};

struct SimReport {
  std::uint64_t steps = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t seed = 0;
  std::uint64_t count_h0 = 0;  // post-burn-in steps with H = 0
  std::uint64_t count_h1 = 0;
  double fc_error_frequency = 0.0;
  std::vector<SensorStats> sensors;
};

/// Deterministic, collision-resistant per-stream seed derivation.
std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                 std::uint64_t stream_id);

SimReport run(const SimConfig& config);

void to_json(nlohmann::json& j, const SensorStats& s);
void to_json(nlohmann::json& j, const SimReport& r);

}  // namespace ehsense
