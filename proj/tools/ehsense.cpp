// ============================================================================
// ehsense.cpp -- command-line front end.
//
// Subcommands:
//   design    per-sensor threshold optimization (adapted and unconstrained)
//   sweep     parameter sweep producing one CSV/JSON row per point
//   simulate  Monte Carlo run with an analytic-vs-empirical comparison table
//   bound     capacity-dependent BD upper bound per sensor
//
// Exit codes: 0 ok, 2 input error, 3 degenerate objective.
// ============================================================================
#include "ehsense/design.hpp"
#include "ehsense/network.hpp"
#include "ehsense/scenario.hpp"
#include "ehsense/sim.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace {

using ehsense::ChannelModel;
using ehsense::DesignResult;
using ehsense::GridSpec;
using ehsense::NetworkScenario;
using ehsense::ObservationModel;
using ehsense::RayleighRician;
using ehsense::ScenarioFile;
using ehsense::SensorDesign;
using ehsense::SensorSpec;
using nlohmann::json;

struct CommonOptions {
  std::string scenario_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<int> grid_points;
  std::optional<double> grid_max;
  std::optional<int> refine;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

void add_common_flags(CLI::App* cmd, CommonOptions* opt) {
  cmd->add_option("--scenario", opt->scenario_path, "Scenario JSON file")
      ->required();
  cmd->add_option("--out", opt->out_path, "Output path (default stdout)");
  cmd->add_option("--format", opt->format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--grid-points", opt->grid_points, "Threshold grid points");
  cmd->add_option("--grid-max", opt->grid_max, "Threshold grid upper end");
  cmd->add_option("--refine", opt->refine, "Grid refinement rounds");
  cmd->add_option("--workers", opt->workers, "Worker threads for sweeps");
  cmd->add_option("--seed", opt->seed, "Master seed (overrides the file)");
}

// 17 significant digits, '.' decimal, "inf" for unbounded values.
std::string fmt17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json json_number(double x) {
  if (std::isinf(x)) return nullptr;  // unbounded BD encodes as null
  return x;
}

std::ostream& open_output(const CommonOptions& opt, std::ofstream& file) {
  if (opt.out_path.empty()) return std::cout;
  file.open(opt.out_path);
  if (!file) throw ehsense::ScenarioError("cannot open output: " + opt.out_path);
  return file;
}

GridSpec grid_for(const ObservationModel& model, const CommonOptions& opt) {
  GridSpec g = ehsense::default_grid(model);
  if (opt.grid_points) g.points = *opt.grid_points;
  if (opt.grid_max) g.tau_max = *opt.grid_max;
  if (opt.refine) g.refinement_rounds = *opt.refine;
  return g;
}

int worker_count(const CommonOptions& opt) {
  if (opt.workers) return std::max(1, *opt.workers);
  if (const char* env = std::getenv("EHSENSE_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

struct SensorEvaluation {
  DesignResult adapted;
  DesignResult unconstrained;
  double bd_at_tau_u = 0.0;  // constrained BD when using the unconstrained threshold
  double bound = 0.0;
};

SensorEvaluation evaluate_sensor(const SensorSpec& spec, double pi1,
                                 const ChannelModel& ch,
                                 const CommonOptions& opt) {
  const GridSpec grid = grid_for(spec.model, opt);
  SensorEvaluation ev;
  ev.adapted = ehsense::optimize_constrained(spec.model, spec.capacity, spec.pe,
                                             pi1, ch, grid);
  ev.unconstrained = ehsense::optimize_unconstrained(spec.model, pi1, ch, grid);
  ev.bd_at_tau_u = ehsense::constrained_bd(
      ehsense::make_sensor_design(spec.model, ev.unconstrained.tau_star,
                                  spec.capacity, spec.pe, ch, pi1),
      pi1);
  ev.bound = ehsense::bd_upper_bound(spec.capacity, spec.pe, pi1, ch);
  return ev;
}

NetworkScenario build_network(const ScenarioFile& file,
                              const std::vector<double>& taus) {
  NetworkScenario net;
  net.pi1 = file.pi1;
  for (std::size_t i = 0; i < file.sensors.size(); ++i) {
    const SensorSpec& spec = file.sensors[i];
    net.sensors.push_back(ehsense::make_sensor_design(
        spec.model, taus[i], spec.capacity, spec.pe, file.channel, file.pi1));
  }
  return net;
}

// ---------------------------------------------------------------------------
// design
// ---------------------------------------------------------------------------
int cmd_design(const CommonOptions& opt) {
  const ScenarioFile file = ehsense::load_scenario(opt.scenario_path);
  std::ofstream fout;
  std::ostream& os = open_output(opt, fout);

  json rows = json::array();
  std::ostringstream csv;
  csv << "sensor,tau_star,bd_tau_star,tau_u,bd_tau_u,p0,bd_bound\n";
  for (std::size_t i = 0; i < file.sensors.size(); ++i) {
    const SensorEvaluation ev =
        evaluate_sensor(file.sensors[i], file.pi1, file.channel, opt);
    csv << i << ',' << fmt17(ev.adapted.tau_star) << ','
        << fmt17(ev.adapted.bd_at_star) << ',' << fmt17(ev.unconstrained.tau_star)
        << ',' << fmt17(ev.bd_at_tau_u) << ',' << fmt17(ev.adapted.p0) << ','
        << fmt17(ev.bound) << '\n';
    rows.push_back({{"sensor", i},
                    {"tau_star", ev.adapted.tau_star},
                    {"bd_tau_star", json_number(ev.adapted.bd_at_star)},
                    {"tau_u", ev.unconstrained.tau_star},
                    {"bd_tau_u", json_number(ev.bd_at_tau_u)},
                    {"p0", ev.adapted.p0},
                    {"bd_bound", json_number(ev.bound)}});
  }
  if (opt.format == "json") {
    os << rows.dump(2) << '\n';
  } else {
    os << csv.str();
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------
struct SweepRow {
  double value = 0.0;
  double bd_tau_star = 0.0;
  double bd_tau_u = 0.0;
  double bound = 0.0;
  double pe_tau_star = 0.0;
  double pe_tau_u = 0.0;
  double kailath = 0.0;
};

ScenarioFile apply_sweep_value(ScenarioFile file, ehsense::SweepVariable var,
                               double value) {
  for (SensorSpec& spec : file.sensors) {
    switch (var) {
      case ehsense::SweepVariable::S:
        if (auto* rr = std::get_if<RayleighRician>(&spec.model)) rr->s = value;
        break;
      case ehsense::SweepVariable::K:
        spec.capacity = static_cast<int>(std::lround(value));
        break;
      case ehsense::SweepVariable::Tau:
        spec.tau = value;
        break;
      case ehsense::SweepVariable::Pe:
        spec.pe = value;
        break;
    }
  }
  return file;
}

SweepRow evaluate_sweep_point(const ScenarioFile& base,
                              const ehsense::SweepSpec& sweep, double value,
                              const CommonOptions& opt) {
  const ScenarioFile file = apply_sweep_value(base, sweep.variable, value);
  const SensorSpec& lead = file.sensors.front();

  SweepRow row;
  row.value = value;
  double tau_star = 0.0, tau_u = 0.0;
  if (sweep.variable == ehsense::SweepVariable::Tau) {
    // Thresholds are the swept variable itself; nothing to optimize.
    tau_star = tau_u = value;
    const SensorDesign d = ehsense::make_sensor_design(
        lead.model, value, lead.capacity, lead.pe, file.channel, file.pi1);
    row.bd_tau_star = ehsense::constrained_bd(d, file.pi1);
    row.bd_tau_u = ehsense::unconstrained_bd(d.tails.q0, d.tails.q1, file.channel);
    row.bound = ehsense::bd_upper_bound(lead.capacity, lead.pe, file.pi1,
                                        file.channel);
  } else {
    const SensorEvaluation ev =
        evaluate_sensor(lead, file.pi1, file.channel, opt);
    tau_star = ev.adapted.tau_star;
    tau_u = ev.unconstrained.tau_star;
    row.bd_tau_star = ev.adapted.bd_at_star;
    row.bd_tau_u = ev.bd_at_tau_u;
    row.bound = ev.bound;
  }

  const NetworkScenario at_star = build_network(
      file, std::vector<double>(file.sensors.size(), tau_star));
  const NetworkScenario at_u =
      build_network(file, std::vector<double>(file.sensors.size(), tau_u));
  row.pe_tau_star = ehsense::map_error_probability(at_star);
  row.pe_tau_u = ehsense::map_error_probability(at_u);
  row.kailath = ehsense::kailath_bound(ehsense::total_bd(at_star), file.pi1);
  return row;
}

int cmd_sweep(const CommonOptions& opt) {
  const ScenarioFile file = ehsense::load_scenario(opt.scenario_path);
  if (!file.sweep)
    throw ehsense::ScenarioError("/sweep: block required for the sweep command");
  const ehsense::SweepSpec& sweep = *file.sweep;

  std::vector<double> values(sweep.points);
  for (int i = 0; i < sweep.points; ++i) {
    values[i] = sweep.points == 1
                    ? sweep.from
                    : sweep.from + (sweep.to - sweep.from) * i / (sweep.points - 1);
    if (sweep.variable == ehsense::SweepVariable::K)
      values[i] = std::lround(values[i]);
  }

  std::vector<SweepRow> rows(values.size());
  const int workers =
      std::min<int>(worker_count(opt), static_cast<int>(values.size()));
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&](int worker) {
    for (std::size_t i = worker; i < values.size(); i += workers) {
      try {
        rows[i] = evaluate_sweep_point(file, sweep, values[i], opt);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::ofstream fout;
  std::ostream& os = open_output(opt, fout);
  if (opt.format == "json") {
    json out = json::array();
    for (const SweepRow& r : rows) {
      out.push_back({{to_string(sweep.variable), r.value},
                     {"bd_tau_star", json_number(r.bd_tau_star)},
                     {"bd_tau_u", json_number(r.bd_tau_u)},
                     {"bd_bound", json_number(r.bound)},
                     {"pe_tau_star", r.pe_tau_star},
                     {"pe_tau_u", r.pe_tau_u},
                     {"kailath_bound", r.kailath}});
    }
    os << out.dump(2) << '\n';
  } else {
    os << to_string(sweep.variable)
       << ",bd_tau_star,bd_tau_u,bd_bound,pe_tau_star,pe_tau_u,kailath_bound\n";
    for (const SweepRow& r : rows) {
      os << fmt17(r.value) << ',' << fmt17(r.bd_tau_star) << ','
         << fmt17(r.bd_tau_u) << ',' << fmt17(r.bound) << ','
         << fmt17(r.pe_tau_star) << ',' << fmt17(r.pe_tau_u) << ','
         << fmt17(r.kailath) << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------
int cmd_simulate(const CommonOptions& opt) {
  const ScenarioFile file = ehsense::load_scenario(opt.scenario_path);
  if (!file.sim)
    throw ehsense::ScenarioError("/sim: block required for the simulate command");
  for (const SensorSpec& spec : file.sensors) {
    if (spec.capacity == ehsense::BatteryParams::kInfiniteCapacity)
      throw ehsense::ScenarioError("/sensors: finite capacity required for simulation");
  }

  // Fixed thresholds are used as-is; missing ones are designed first.
  std::vector<double> taus;
  for (const SensorSpec& spec : file.sensors) {
    if (spec.tau) {
      taus.push_back(*spec.tau);
    } else {
      taus.push_back(ehsense::optimize_constrained(spec.model, spec.capacity,
                                                   spec.pe, file.pi1,
                                                   file.channel,
                                                   grid_for(spec.model, opt))
                         .tau_star);
    }
  }
  ehsense::SimConfig config;
  config.scenario = build_network(file, taus);
  config.steps = file.sim->steps;
  config.seed = opt.seed.value_or(file.sim->seed);
  config.burn_in = file.sim->burn_in;
  config.initial_battery = file.sim->initial_battery;
  config.initial_level = file.sim->initial_level;

  const ehsense::SimReport report = ehsense::run(config);
  const double analytic_pe = ehsense::map_error_probability(config.scenario);
  const double recorded =
      static_cast<double>(report.count_h0 + report.count_h1);

  struct Comparison {
    std::string quantity;
    int sensor;  // -1 for network-level rows
    double analytic;
    double empirical;
    double sigma3;
  };
  std::vector<Comparison> comparisons;
  for (std::size_t i = 0; i < config.scenario.sensors.size(); ++i) {
    const SensorDesign& s = config.scenario.sensors[i];
    const auto [a, b] =
        ehsense::channel_output_pmf(s.tails.q0, s.tails.q1, s.p0, s.channel);
    auto sigma3 = [](double p, double n) {
      return 3.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
    };
    comparisons.push_back({"p0", static_cast<int>(i), s.p0,
                           report.sensors[i].depletion_frequency,
                           sigma3(s.p0, recorded)});
    comparisons.push_back({"py1_given_h0", static_cast<int>(i), a,
                           report.sensors[i].py1_given_h0,
                           sigma3(a, static_cast<double>(report.count_h0))});
    comparisons.push_back({"py1_given_h1", static_cast<int>(i), b,
                           report.sensors[i].py1_given_h1,
                           sigma3(b, static_cast<double>(report.count_h1))});
  }
  comparisons.push_back({"map_error", -1, analytic_pe,
                         report.fc_error_frequency,
                         3.0 * std::sqrt(std::max(analytic_pe * (1 - analytic_pe),
                                                  1e-12) / recorded)});

  std::ofstream fout;
  std::ostream& os = open_output(opt, fout);
  json comparison = json::array();
  for (const Comparison& c : comparisons) {
    comparison.push_back(
        {{"quantity", c.quantity},
         {"sensor", c.sensor},
         {"analytic", c.analytic},
         {"empirical", c.empirical},
         {"sigma3", c.sigma3},
         {"status", std::abs(c.analytic - c.empirical) <= c.sigma3 ? "PASS" : "FAIL"}});
  }
  os << json{{"report", report}, {"comparison", comparison}}.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------
int cmd_bound(const CommonOptions& opt) {
  const ScenarioFile file = ehsense::load_scenario(opt.scenario_path);
  std::ofstream fout;
  std::ostream& os = open_output(opt, fout);
  if (opt.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < file.sensors.size(); ++i) {
      const SensorSpec& s = file.sensors[i];
      rows.push_back(
          {{"sensor", i},
           {"K", s.capacity == ehsense::BatteryParams::kInfiniteCapacity
                     ? json("inf")
                     : json(s.capacity)},
           {"pe", s.pe},
           {"bd_bound", json_number(ehsense::bd_upper_bound(
                            s.capacity, s.pe, file.pi1, file.channel))}});
    }
    os << rows.dump(2) << '\n';
  } else {
    os << "sensor,K,pe,bd_bound\n";
    for (std::size_t i = 0; i < file.sensors.size(); ++i) {
      const SensorSpec& s = file.sensors[i];
      os << i << ','
         << (s.capacity == ehsense::BatteryParams::kInfiniteCapacity
                 ? std::string("inf")
                 : std::to_string(s.capacity))
         << ',' << fmt17(s.pe) << ','
         << fmt17(ehsense::bd_upper_bound(s.capacity, s.pe, file.pi1,
                                          file.channel))
         << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and analysis toolkit for energy harvesting sensor networks"};
  app.require_subcommand(1);

  CommonOptions opt;
  CLI::App* design = app.add_subcommand("design", "Optimize sensor thresholds");
  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo simulation");
  CLI::App* bound = app.add_subcommand("bound", "BD upper bound per sensor");
  for (CLI::App* cmd : {design, sweep, simulate, bound})
    add_common_flags(cmd, &opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) return cmd_design(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (bound->parsed()) return cmd_bound(opt);
  } catch (const ehsense::DegenerateObjectiveError& e) {
    std::cerr << "degenerate objective: " << e.what() << '\n';
    return 3;
  } catch (const ehsense::ScenarioError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
