#include "ehsense/sim.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace ehsense {

namespace {

// splitmix64 finalizer; decorrelates arbitrary (seed, stream) pairs.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

enum StreamPurpose : std::uint64_t {
  kHypothesis = 0,
  kObservation = 1,
  kChannel = 2,
  kEnergy = 3,
  kConsumption = 4,
};

std::uint64_t stream_id(StreamPurpose purpose, std::size_t sensor) {
  return (static_cast<std::uint64_t>(purpose) << 32) | sensor;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                 std::uint64_t stream) {
  return mix64(mix64(master_seed) ^ mix64(stream * 0xd1342543de82ef95ull + 1));
}

void validate(const SimConfig& config) {
  validate(config.scenario);
  if (config.steps <= config.burn_in)
    throw std::invalid_argument("steps must exceed burn_in");
  for (const SensorDesign& s : config.scenario.sensors) {
    if (s.capacity == BatteryParams::kInfiniteCapacity)
      throw std::invalid_argument("finite capacity required for simulation");
    if (config.initial_battery == InitialBattery::Level &&
        (config.initial_level < 0 || config.initial_level > s.capacity))
      throw std::invalid_argument("initial battery level exceeds capacity");
  }
}

SimReport run(const SimConfig& config) {
  validate(config);
  const NetworkScenario& scenario = config.scenario;
  const std::size_t n = scenario.sensors.size();

  std::mt19937_64 hyp_rng(derive_stream_seed(config.seed, stream_id(kHypothesis, 0)));
  std::vector<std::mt19937_64> obs_rng, chan_rng, energy_rng, cons_rng;
  for (std::size_t i = 0; i < n; ++i) {
    obs_rng.emplace_back(derive_stream_seed(config.seed, stream_id(kObservation, i)));
    chan_rng.emplace_back(derive_stream_seed(config.seed, stream_id(kChannel, i)));
    energy_rng.emplace_back(derive_stream_seed(config.seed, stream_id(kEnergy, i)));
    cons_rng.emplace_back(derive_stream_seed(config.seed, stream_id(kConsumption, i)));
  }

  // The FC applies the MAP rule derived from the analytic joint law.
  const std::vector<std::uint8_t> decision = map_decision_table(scenario);

  std::vector<int> battery(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (config.initial_battery) {
      case InitialBattery::Empty: battery[i] = 0; break;
      case InitialBattery::Full: battery[i] = scenario.sensors[i].capacity; break;
      case InitialBattery::Level: battery[i] = config.initial_level; break;
    }
  }

  std::vector<std::vector<std::uint64_t>> hist(n);
  for (std::size_t i = 0; i < n; ++i)
    hist[i].assign(static_cast<std::size_t>(scenario.sensors[i].capacity) + 1, 0);
  std::vector<std::uint64_t> y1_h0(n, 0), y1_h1(n, 0);
  std::uint64_t count_h0 = 0, count_h1 = 0, fc_errors = 0;

  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (std::uint64_t t = 0; t < config.steps; ++t) {
    const bool record = t >= config.burn_in;
    const int h = unif(hyp_rng) < scenario.pi1 ? 1 : 0;
    std::uint64_t y_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const SensorDesign& s = scenario.sensors[i];
      bool intended;
      if (const auto* rr = std::get_if<RayleighRician>(&s.model)) {
        intended = sample(*rr, h, obs_rng[i]) >= s.tau;
      } else {
        const double qh = h == 0 ? s.tails.q0 : s.tails.q1;
        intended = unif(obs_rng[i]) < qh;
      }
      const bool u = intended && battery[i] > 0;
      const bool y = u ? unif(chan_rng[i]) >= s.channel.eps1
                       : unif(chan_rng[i]) < s.channel.eps0;
      if (y) y_index |= std::uint64_t{1} << i;

      if (record) {
        ++hist[i][static_cast<std::size_t>(battery[i])];
        if (h == 0) y1_h0[i] += y; else y1_h1[i] += y;
      }

      // The battery is drained by the sensor's own prior-mixture transmission
      // process, independent across sensors, so the joint battery law stays a
      // product of the per-sensor stationary chains -- the regime the analytic
      // network law describes.  Arrival during interval t is usable from t+1.
      const bool w = battery[i] > 0 && unif(cons_rng[i]) < s.q;
      const int e = unif(energy_rng[i]) < s.pe ? 1 : 0;
      battery[i] = std::min(battery[i] - (w ? 1 : 0) + e, s.capacity);
    }
    if (record) {
      if (h == 0) ++count_h0; else ++count_h1;
      fc_errors += decision[static_cast<std::size_t>(y_index)] != h;
    }
  }

  SimReport report;
  report.steps = config.steps;
  report.burn_in = config.burn_in;
  report.seed = config.seed;
  report.count_h0 = count_h0;
  report.count_h1 = count_h1;
  const double recorded = static_cast<double>(count_h0 + count_h1);
  report.fc_error_frequency = static_cast<double>(fc_errors) / recorded;
  report.sensors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    SensorStats& stats = report.sensors[i];
    stats.battery_histogram.resize(hist[i].size());
    for (std::size_t k = 0; k < hist[i].size(); ++k)
      stats.battery_histogram[k] = static_cast<double>(hist[i][k]) / recorded;
    stats.depletion_frequency = stats.battery_histogram[0];
    stats.py1_given_h0 = count_h0 ? static_cast<double>(y1_h0[i]) / count_h0 : 0.0;
    stats.py1_given_h1 = count_h1 ? static_cast<double>(y1_h1[i]) / count_h1 : 0.0;
  }
  return report;
}

void to_json(nlohmann::json& j, const SensorStats& s) {
  j = nlohmann::json{{"battery_histogram", s.battery_histogram},
                     {"depletion_frequency", s.depletion_frequency},
                     {"py1_given_h0", s.py1_given_h0},
                     {"py1_given_h1", s.py1_given_h1}};
}

void to_json(nlohmann::json& j, const SimReport& r) {
  j = nlohmann::json{{"steps", r.steps},
                     {"burn_in", r.burn_in},
                     {"seed", r.seed},
                     {"count_h0", r.count_h0},
                     {"count_h1", r.count_h1},
                     {"fc_error_frequency", r.fc_error_frequency},
                     {"sensors", r.sensors}};
}

}  // namespace ehsense
