#include "ehsense/scenario.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

using namespace ehsense;
using nlohmann::json;

namespace {

json valid_doc() {
  return json::parse(R"({
    "pi1": 0.2,
    "channel": {"eps0": 0.1, "eps1": 0.2},
    "sensors": [
      {"model": {"kind": "rayleigh_rician", "s": 5.0}, "K": 1, "pe": 0.15},
      {"model": {"kind": "table", "entries": [[0.0, 1.0, 1.0], [1.5, 0.1, 0.9]]},
       "K": "inf", "pe": 0.3, "tau": 1.5}
    ],
    "sweep": {"variable": "s", "from": 1.0, "to": 10.0, "points": 10},
    "sim": {"steps": 100000, "seed": 42, "burn_in": 5000, "initial_battery": "full"}
  })");
}

}  // namespace

TEST_CASE("valid scenario parses completely") {
  const ScenarioFile file = parse_scenario(valid_doc());
  CHECK(file.pi1 == 0.2);
  CHECK(file.channel.eps0 == 0.1);
  REQUIRE(file.sensors.size() == 2);
  CHECK(std::holds_alternative<RayleighRician>(file.sensors[0].model));
  CHECK(!file.sensors[0].tau.has_value());
  CHECK(file.sensors[1].capacity == BatteryParams::kInfiniteCapacity);
  CHECK(file.sensors[1].tau == 1.5);
  REQUIRE(file.sweep.has_value());
  CHECK(file.sweep->variable == SweepVariable::S);
  CHECK(file.sweep->points == 10);
  REQUIRE(file.sim.has_value());
  CHECK(file.sim->initial_battery == InitialBattery::Full);
}

TEST_CASE("schema violations carry a field path") {
  auto expect_error = [](json doc, const std::string& fragment) {
    try {
      parse_scenario(doc);
      FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };

  json bad_pi1 = valid_doc();
  bad_pi1["pi1"] = 1.5;
  expect_error(bad_pi1, "/pi1");

  json bad_eps = valid_doc();
  bad_eps["channel"]["eps0"] = 0.5;
  expect_error(bad_eps, "/channel");

  json bad_kind = valid_doc();
  bad_kind["sensors"][0]["model"]["kind"] = "gaussian";
  expect_error(bad_kind, "/sensors/0/model/kind");

  json bad_capacity = valid_doc();
  bad_capacity["sensors"][0]["K"] = 0;
  expect_error(bad_capacity, "/sensors/0/K");

  json bad_sweep = valid_doc();
  bad_sweep["sweep"]["variable"] = "sigma";
  expect_error(bad_sweep, "/sweep/variable");

  json bad_burn = valid_doc();
  bad_burn["sim"]["burn_in"] = 100000;
  expect_error(bad_burn, "/sim/burn_in");

  json missing = valid_doc();
  missing.erase("sensors");
  expect_error(missing, "/sensors");
}

TEST_CASE("capacity accepts the inf marker only") {
  json doc = valid_doc();
  doc["sensors"][0]["K"] = "unbounded";
  CHECK_THROWS_AS(parse_scenario(doc), ScenarioError);
  doc["sensors"][0]["K"] = "inf";
  CHECK(parse_scenario(doc).sensors[0].capacity ==
        BatteryParams::kInfiniteCapacity);
}
