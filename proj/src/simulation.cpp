#include "battsched/simulation.hpp"

#include <chrono>
#include <cmath>

#include "battsched/errors.hpp"

namespace battsched {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace

DispatchAction IdleController::decide(std::size_t t, const ScenarioSeries& scenario,
                                      const BatteryState&, const BatteryParams&) {
  return make_action(scenario.load_kw[t], scenario.pv_kw[t], 0.0, 0.0);
}

ScmController::ScmController(ScmConfig cfg) : cfg_(cfg) { cfg_.validate(); }

DispatchAction ScmController::decide(std::size_t t, const ScenarioSeries& scenario,
                                     const BatteryState& state, const BatteryParams& params) {
  return scm_decide(scenario.load_kw[t], scenario.pv_kw[t], state, params, cfg_,
                    scenario.dt_hours);
}

MpcController::MpcController(MpcConfig cfg) : cfg_(cfg) { cfg_.validate(); }

DispatchAction MpcController::decide(std::size_t t, const ScenarioSeries& scenario,
                                     const BatteryState& state, const BatteryParams& params) {
  return mpc_decide(t, scenario, state, params, cfg_, solver_);
}

StochasticController::StochasticController(SrrConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void StochasticController::reset(const ScenarioSeries& scenario, const BatteryParams&,
                                 std::uint64_t seed) {
  norm_ = NormalizedPrices::from_scenario(scenario);
  rng_ = Rng(seed);
}

DispatchAction StochasticController::decide(std::size_t t, const ScenarioSeries& scenario,
                                            const BatteryState& state,
                                            const BatteryParams& params) {
  return stochastic_decide(t, norm_, scenario.load_kw[t], scenario.pv_kw[t], state, params, cfg_,
                           scenario.dt_hours, rng_);
}

void ExternalSignalConfig::validate() const {
  if (!(probability >= 0 && probability <= 1)) {
    throw ValidationError("signal probability must lie in [0, 1]");
  }
  if (!(direction_split >= 0 && direction_split <= 1)) {
    throw ValidationError("signal direction_split must lie in [0, 1]");
  }
}

SimulationReport run_simulation(const ScenarioSeries& scenario, Controller& controller,
                                const BatteryParams& params, const ExternalSignalConfig& signals,
                                std::uint64_t seed) {
  scenario.validate();
  params.validate();
  signals.validate();

  SimulationReport report;
  report.controller = controller.name();
  report.trajectory.reserve(scenario.size());

  const auto setup_start = Clock::now();
  controller.reset(scenario, params, derive_seed(seed, kControllerStream));
  report.setup_seconds = seconds_between(setup_start, Clock::now());

  Rng signal_rng(derive_seed(seed, kSignalStream));
  BatteryState state{params.e_init_kwh()};
  CostLedger ledger;
  const double dt = scenario.dt_hours;

  for (std::size_t t = 0; t < scenario.size(); ++t) {
    const double load = scenario.load_kw[t];
    const double pv = scenario.pv_kw[t];
    // Both draws happen every interval so the signal pattern for a seed is
    // nested across probabilities.
    const double fire = signal_rng.uniform();
    const double direction = signal_rng.uniform();

    TrajectoryRow row;
    row.interval = t;
    if (fire < signals.probability) {
      row.overridden = true;
      ++report.intervals_overridden;
      if (direction < signals.direction_split) {
        row.action = make_action(load, pv, charge_power_cap(load, pv, state, params, dt), 0.0);
      } else {
        row.action = make_action(load, pv, 0.0, discharge_power_cap(load, pv, state, params, dt));
      }
    } else {
      const auto start = Clock::now();
      row.action = controller.decide(t, scenario, state, params);
      row.decision_seconds = seconds_between(start, Clock::now());
      report.controller_runtime_seconds += row.decision_seconds;
    }

    state = step_battery(state, row.action, params, dt);
    row.energy_kwh = state.energy_kwh;
    row.cost = interval_cost(row.action, scenario.price_buy[t], scenario.price_sell[t], dt);
    ledger.add(row.cost);
    report.trajectory.push_back(row);
  }
  report.total_cost = ledger.total();
  return report;
}

const MethodSummary& Comparison::method(const std::string& label) const {
  for (const auto& m : methods) {
    if (m.label == label) return m;
  }
  throw ValidationError("no method labelled '" + label + "' in comparison");
}

double percent_difference(double cost_a, double cost_b) {
  return 100.0 * (cost_a - cost_b) / cost_b;
}

Comparison run_comparison(const ScenarioSeries& scenario, const std::vector<MethodSpec>& methods,
                          const BatteryParams& params, const ExternalSignalConfig& signals,
                          const std::vector<std::uint64_t>& seeds, bool keep_reports) {
  if (seeds.empty()) throw ValidationError("run_comparison needs at least one seed");
  Comparison out;
  out.seeds = seeds;
  for (const MethodSpec& spec : methods) {
    MethodSummary summary;
    summary.label = spec.label;
    std::unique_ptr<Controller> controller = spec.make();
    const bool single_run = controller->deterministic() && signals.probability == 0.0;
    double runtime = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (single_run && i > 0) {
        summary.costs.push_back(summary.costs.front());
        if (keep_reports) summary.reports.push_back(summary.reports.front());
        continue;
      }
      SimulationReport report = run_simulation(scenario, *controller, params, signals, seeds[i]);
      runtime += report.controller_runtime_seconds;
      ++summary.runs;
      summary.costs.push_back(report.total_cost);
      if (keep_reports) summary.reports.push_back(std::move(report));
    }
    const double n = static_cast<double>(summary.costs.size());
    double sum = 0.0;
    for (double c : summary.costs) sum += c;
    summary.mean_cost = sum / n;
    if (summary.costs.size() > 1) {
      double squares = 0.0;
      for (double c : summary.costs) squares += (c - summary.mean_cost) * (c - summary.mean_cost);
      summary.stderr_cost = std::sqrt(squares / (n - 1.0)) / std::sqrt(n);
    }
    summary.mean_runtime_seconds = runtime / static_cast<double>(summary.runs);
    out.methods.push_back(std::move(summary));
  }
  return out;
}

}  // namespace battsched
