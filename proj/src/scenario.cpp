#include "ehsense/scenario.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace ehsense {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

const json& require(const json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double probability(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x >= 0.0 && x <= 1.0)) fail(path, "must lie in [0,1]");
  return x;
}

ObservationModel parse_model(const json& v, const std::string& path) {
  const std::string kind = require(v, "kind", path).get<std::string>();
  if (kind == "rayleigh_rician") {
    RayleighRician m;
    m.s = number(require(v, "s", path), path + "/s");
    if (v.contains("sigma0")) m.sigma0 = number(v["sigma0"], path + "/sigma0");
    if (v.contains("sigma1")) m.sigma1 = number(v["sigma1"], path + "/sigma1");
    try {
      validate(m);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
    return m;
  }
  if (kind == "table") {
    TailTable t;
    const json& entries = require(v, "entries", path);
    if (!entries.is_array() || entries.empty())
      fail(path + "/entries", "expected a non-empty array of [tau, q0, q1]");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string p = path + "/entries/" + std::to_string(i);
      const json& row = entries[i];
      if (!row.is_array() || row.size() != 3) fail(p, "expected [tau, q0, q1]");
      t.tau.push_back(number(row[0], p));
      t.tails.push_back({probability(row[1], p), probability(row[2], p)});
    }
    try {
      validate(t);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
    return t;
  }
  fail(path + "/kind", "unknown model kind '" + kind + "'");
}

int parse_capacity(const json& v, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return BatteryParams::kInfiniteCapacity;
    fail(path, "capacity must be a positive integer or \"inf\"");
  }
  if (!v.is_number_integer() || v.get<int>() < 1)
    fail(path, "capacity must be a positive integer or \"inf\"");
  return v.get<int>();
}

SweepSpec parse_sweep(const json& v, const std::string& path) {
  SweepSpec s;
  const std::string var = require(v, "variable", path).get<std::string>();
  if (var == "s") s.variable = SweepVariable::S;
  else if (var == "K") s.variable = SweepVariable::K;
  else if (var == "tau") s.variable = SweepVariable::Tau;
  else if (var == "pe") s.variable = SweepVariable::Pe;
  else fail(path + "/variable", "must be one of s, K, tau, pe");
  s.from = number(require(v, "from", path), path + "/from");
  s.to = number(require(v, "to", path), path + "/to");
  const json& pts = require(v, "points", path);
  if (!pts.is_number_integer() || pts.get<int>() < 1)
    fail(path + "/points", "must be a positive integer");
  s.points = pts.get<int>();
  if (s.points > 1 && !(s.from < s.to))
    fail(path, "sweep range requires from < to");
  return s;
}

SimSpec parse_sim(const json& v, const std::string& path) {
  SimSpec s;
  const json& steps = require(v, "steps", path);
  if (!steps.is_number_unsigned() || steps.get<std::uint64_t>() == 0)
    fail(path + "/steps", "must be a positive integer");
  s.steps = steps.get<std::uint64_t>();
  s.seed = require(v, "seed", path).get<std::uint64_t>();
  if (v.contains("burn_in")) s.burn_in = v["burn_in"].get<std::uint64_t>();
  if (s.burn_in >= s.steps) fail(path + "/burn_in", "must be below steps");
  if (v.contains("initial_battery")) {
    const json& init = v["initial_battery"];
    if (init.is_string() && init == "empty") {
      s.initial_battery = InitialBattery::Empty;
    } else if (init.is_string() && init == "full") {
      s.initial_battery = InitialBattery::Full;
    } else if (init.is_number_integer() && init.get<int>() >= 0) {
      s.initial_battery = InitialBattery::Level;
      s.initial_level = init.get<int>();
    } else {
      fail(path + "/initial_battery",
           "must be \"empty\", \"full\", or a nonnegative level");
    }
  }
  return s;
}

}  // namespace

ScenarioFile parse_scenario(const json& doc) {
  ScenarioFile file;
  file.pi1 = number(require(doc, "pi1", ""), "/pi1");
  if (!(file.pi1 > 0.0 && file.pi1 < 1.0)) fail("/pi1", "must lie in (0,1)");

  const json& ch = require(doc, "channel", "");
  file.channel.eps0 = probability(require(ch, "eps0", "/channel"), "/channel/eps0");
  file.channel.eps1 = probability(require(ch, "eps1", "/channel"), "/channel/eps1");
  try {
    validate(file.channel);
  } catch (const std::invalid_argument& e) {
    fail("/channel", e.what());
  }

  const json& sensors = require(doc, "sensors", "");
  if (!sensors.is_array() || sensors.empty())
    fail("/sensors", "expected a non-empty array");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const std::string path = "/sensors/" + std::to_string(i);
    const json& sv = sensors[i];
    SensorSpec spec;
    spec.model = parse_model(require(sv, "model", path), path + "/model");
    spec.capacity = parse_capacity(require(sv, "K", path), path + "/K");
    spec.pe = probability(require(sv, "pe", path), path + "/pe");
    if (sv.contains("tau")) {
      spec.tau = number(sv["tau"], path + "/tau");
      if (*spec.tau < 0.0) fail(path + "/tau", "must be >= 0");
    }
    file.sensors.push_back(std::move(spec));
  }

  if (doc.contains("sweep")) file.sweep = parse_sweep(doc["sweep"], "/sweep");
  if (doc.contains("sim")) file.sim = parse_sim(doc["sim"], "/sim");
  return file;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::S: return "s";
    case SweepVariable::K: return "K";
    case SweepVariable::Tau: return "tau";
    case SweepVariable::Pe: return "pe";
  }
  return "?";
}

}  // namespace ehsense
