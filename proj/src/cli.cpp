#include "battsched/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "battsched/config.hpp"
#include "battsched/errors.hpp"
#include "battsched/report.hpp"
#include "battsched/scenario_io.hpp"
#include "battsched/simulation.hpp"
#include "battsched/synthetic.hpp"

namespace battsched {

namespace {

struct CommonFlags {
  std::string config;
  std::string scenario;
  std::optional<double> tariff;
  std::string out;
  std::optional<std::uint64_t> seed_count;
  std::vector<std::uint64_t> seed_list;
  std::optional<double> probability;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config,-c", f.config, "INI run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--scenario,-s", f.scenario, "scenario CSV (timestamp,load_kw,pv_kw,price_spot)");
  cmd->add_option("--tariff", f.tariff, "tariff adder on spot for the buy price (currency/kWh)");
  cmd->add_option("--out,-o", f.out, "output directory");
  cmd->add_option("--seeds", f.seed_count, "use seeds 1..N");
  cmd->add_option("--seed-list", f.seed_list, "explicit seeds")->delimiter(',');
  cmd->add_option("--signal-probability", f.probability,
                  "per-interval probability of an external signal");
}

RunConfig resolve(const CommonFlags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (!f.scenario.empty()) cfg.scenario_csv = f.scenario;
  if (f.tariff) {
    cfg.tariff_adder = *f.tariff;
    cfg.synthetic.tariff_adder = *f.tariff;
  }
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (f.seed_count) {
    cfg.seeds.clear();
    for (std::uint64_t s = 1; s <= *f.seed_count; ++s) cfg.seeds.push_back(s);
  }
  if (!f.seed_list.empty()) cfg.seeds = f.seed_list;
  if (f.probability) cfg.signals.probability = *f.probability;
  cfg.validate();
  return cfg;
}

std::string text_of(const Table& table) {
  std::ostringstream os;
  table.write_text(os);
  return os.str();
}

std::string csv_of(const Table& table) {
  std::ostringstream os;
  table.write_csv(os);
  return os.str();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

// Standard error of the per-seed percentage gap between two methods that saw
// the same signal streams.
double paired_gap_stderr(const MethodSummary& a, const MethodSummary& b) {
  const std::size_t n = a.costs.size();
  std::vector<double> gaps(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gaps[i] = percent_difference(a.costs[i], b.costs[i]);
    sum += gaps[i];
  }
  const double mean = sum / static_cast<double>(n);
  if (n < 2) return 0.0;
  double squares = 0.0;
  for (double g : gaps) squares += (g - mean) * (g - mean);
  return std::sqrt(squares / static_cast<double>(n - 1)) / std::sqrt(double(n));
}

int run_simulate(const CommonFlags& flags, const std::string& controller, std::ostream& out) {
  RunConfig cfg = resolve(flags);
  const ScenarioSeries scenario = load_scenario(cfg);
  const std::vector<MethodSpec> methods{make_method(controller, cfg)};
  const std::vector<std::uint64_t> seeds{cfg.seeds.front()};
  const Comparison cmp = run_comparison(scenario, methods, cfg.battery, cfg.signals, seeds, true);
  emit_report(cmp, cfg.battery, cfg.output_dir);
  const SimulationReport& r = cmp.methods.front().reports.front();
  out << controller << ": cost " << fixed(r.total_cost, 4) << ", decision runtime "
      << fixed(r.controller_runtime_seconds, 6) << " s, " << r.trajectory.size()
      << " intervals, " << r.intervals_overridden << " overridden\n";
  return kExitOk;
}

int run_compare(const CommonFlags& flags, const std::vector<std::string>& controllers,
                std::ostream& out) {
  RunConfig cfg = resolve(flags);
  if (!controllers.empty()) {
    cfg.controllers = controllers;
    cfg.validate();
  }
  const ScenarioSeries scenario = load_scenario(cfg);
  std::vector<MethodSpec> methods;
  for (const auto& name : cfg.controllers) methods.push_back(make_method(name, cfg));
  const Comparison cmp =
      run_comparison(scenario, methods, cfg.battery, cfg.signals, cfg.seeds, true);
  emit_report(cmp, cfg.battery, cfg.output_dir);

  Table text{{"method", "cost", "cost_stderr", "runs", "runtime_s"}, {}};
  for (const auto& m : cmp.methods) {
    text.rows.push_back({m.label, fixed(m.mean_cost, 4), fixed(m.stderr_cost, 4),
                         std::to_string(m.costs.size()), fixed(m.mean_runtime_seconds, 6)});
  }
  out << text_of(text);
  for (std::size_t i = 0; i < cmp.methods.size(); ++i) {
    for (std::size_t j = i + 1; j < cmp.methods.size(); ++j) {
      out << cmp.methods[i].label << " vs " << cmp.methods[j].label << ": "
          << fixed(percent_difference(cmp.methods[i].mean_cost, cmp.methods[j].mean_cost), 3)
          << " %\n";
    }
  }
  return kExitOk;
}

int run_sweep_signals(const CommonFlags& flags, const std::vector<double>& probabilities,
                      std::ostream& out) {
  RunConfig cfg = resolve(flags);
  if (!probabilities.empty()) {
    cfg.probabilities = probabilities;
    cfg.validate();
  }
  const ScenarioSeries scenario = load_scenario(cfg);
  const std::vector<MethodSpec> methods{make_method("mpc", cfg), make_method("stochastic", cfg)};

  Table table{{"probability", "mpc_cost", "stochastic_cost", "difference_pct", "gap_stderr_pct"},
              {}};
  Table timing{{"probability", "mpc_runtime_s", "stochastic_runtime_s"}, {}};
  for (double p : cfg.probabilities) {
    ExternalSignalConfig signals = cfg.signals;
    signals.probability = p;
    const Comparison cmp = run_comparison(scenario, methods, cfg.battery, signals, cfg.seeds);
    const MethodSummary& mpc = cmp.method("mpc");
    const MethodSummary& stochastic = cmp.method("stochastic");
    const double gap_se = paired_gap_stderr(stochastic, mpc);
    table.rows.push_back({format_double(p), format_double(mpc.mean_cost),
                          format_double(stochastic.mean_cost),
                          format_double(percent_difference(stochastic.mean_cost, mpc.mean_cost)),
                          format_double(gap_se)});
    timing.rows.push_back({format_double(p), format_double(mpc.mean_runtime_seconds),
                           format_double(stochastic.mean_runtime_seconds)});
  }
  write_file(cfg.output_dir / "signals.csv", csv_of(table));
  write_file(cfg.output_dir / "signals_timing.csv", csv_of(timing));
  write_file(cfg.output_dir / "signals.txt", text_of(table));
  out << text_of(table);
  return kExitOk;
}

int run_sweep_params(const CommonFlags& flags, std::ostream& out) {
  RunConfig cfg = resolve(flags);
  const ScenarioSeries scenario = load_scenario(cfg);

  Table table{{"method", "parameter", "value", "cost", "cost_stderr"}, {}};
  Table timing{{"method", "parameter", "value", "runtime_s"}, {}};
  auto record = [&](const std::string& method, const std::string& parameter, double value,
                    const MethodSpec& spec) {
    const Comparison cmp = run_comparison(scenario, {spec}, cfg.battery, cfg.signals, cfg.seeds);
    const MethodSummary& m = cmp.methods.front();
    table.rows.push_back({method, parameter, format_double(value), format_double(m.mean_cost),
                          format_double(m.stderr_cost)});
    timing.rows.push_back(
        {method, parameter, format_double(value), format_double(m.mean_runtime_seconds)});
  };
  for (double d : cfg.deadbands) {
    RunConfig c = cfg;
    c.scm.deadband_kw = d;
    record("scm", "deadband_kw", d, make_method("scm", c));
  }
  for (std::size_t h : cfg.horizons) {
    RunConfig c = cfg;
    c.mpc.horizon = h;
    record("mpc", "horizon", static_cast<double>(h), make_method("mpc", c));
  }
  for (double k : cfg.k_values) {
    RunConfig c = cfg;
    c.stochastic.k_charge = k;
    c.stochastic.k_discharge = k;
    record("stochastic", "k", k, make_method("stochastic", c));
  }
  write_file(cfg.output_dir / "params.csv", csv_of(table));
  write_file(cfg.output_dir / "params_timing.csv", csv_of(timing));
  write_file(cfg.output_dir / "params.txt", text_of(table));
  out << text_of(table);
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Battery dispatch simulator: SCM, MPC and stochastic price-responsive control",
               "battsched"};
  app.require_subcommand(1);

  CommonFlags simulate_flags, compare_flags, signals_flags, params_flags;
  std::string controller = "stochastic";
  std::vector<std::string> controllers;
  std::vector<double> probabilities;

  auto* simulate = app.add_subcommand("simulate", "run one controller on one scenario");
  add_common(simulate, simulate_flags);
  simulate->add_option("--controller", controller, "idle | scm | mpc | stochastic")
      ->check(CLI::IsMember({"idle", "scm", "mpc", "stochastic"}));

  auto* compare = app.add_subcommand("compare", "run all controllers and tabulate cost/runtime");
  add_common(compare, compare_flags);
  compare->add_option("--controllers", controllers, "subset of controllers")->delimiter(',');

  auto* sweep_signals =
      app.add_subcommand("sweep-signals", "MPC vs stochastic cost under external signals");
  add_common(sweep_signals, signals_flags);
  sweep_signals->add_option("--probabilities", probabilities, "signal probabilities")
      ->delimiter(',');

  auto* sweep_params = app.add_subcommand("sweep-params", "deadband / horizon / k grids");
  add_common(sweep_params, params_flags);

  SyntheticSpec gen;
  std::string gen_output;
  auto* gen_data = app.add_subcommand("gen-data", "write a synthetic scenario CSV");
  gen_data->add_option("--days", gen.days, "number of days")->check(CLI::PositiveNumber);
  gen_data->add_option("--dt", gen.dt_hours, "interval length in hours");
  gen_data->add_option("--seed", gen.seed, "generator seed");
  gen_data->add_option("--pv-peak", gen.pv_peak_kw, "PV peak power (kW)");
  gen_data->add_option("--mean-load", gen.mean_load_kw, "mean load (kW)");
  gen_data->add_option("--spot-level", gen.spot_level, "mean spot price (currency/kWh)");
  gen_data->add_option("--spot-swing", gen.spot_swing, "scale of the intraday price profile");
  gen_data->add_option("--spot-drift", gen.spot_drift, "day-to-day price level noise");
  gen_data->add_option("--tariff", gen.tariff_adder, "tariff adder on spot for the buy price");
  gen_data->add_option("--start", gen.start, "first timestamp (ISO-8601)");
  gen_data->add_option("--output,-o", gen_output, "destination CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(simulate_flags, controller, out);
    if (compare->parsed()) return run_compare(compare_flags, controllers, out);
    if (sweep_signals->parsed()) return run_sweep_signals(signals_flags, probabilities, out);
    if (sweep_params->parsed()) return run_sweep_params(params_flags, out);
    if (gen_data->parsed()) {
      const ScenarioSeries s = generate_synthetic(gen);
      write_scenario_csv(s, std::filesystem::path(gen_output));
      out << "wrote " << s.size() << " intervals to " << gen_output << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitData;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitData;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitData;
  } catch (const ValidationError& e) {
    err << "invalid data: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  err << app.help();
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace battsched
