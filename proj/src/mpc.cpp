#include "battsched/mpc.hpp"

#include <algorithm>

#include "battsched/errors.hpp"

namespace battsched {

void MpcConfig::validate() const {
  if (horizon < 1) throw ValidationError("mpc horizon must be >= 1");
}

std::size_t mpc_window_length(std::size_t t_now, std::size_t total, std::size_t horizon) {
  if (t_now >= total) throw ValidationError("mpc decision index outside the scenario");
  return std::min(horizon, total - t_now);
}

DispatchAction mpc_decide(std::size_t t_now, const ScenarioSeries& scenario,
                          const BatteryState& state, const BatteryParams& params,
                          const MpcConfig& cfg, MilpSolver& solver) {
  cfg.validate();
  const std::size_t length = mpc_window_length(t_now, scenario.size(), cfg.horizon);
  const MilpProblem problem =
      MilpProblem::from_window(scenario, t_now, length, state.energy_kwh, params);
  const MilpSolution plan = solver.solve(problem);
  return plan.action(0);
}

DispatchAction mpc_decide(std::size_t t_now, const ScenarioSeries& scenario,
                          const BatteryState& state, const BatteryParams& params,
                          const MpcConfig& cfg) {
  MilpSolver solver;
  return mpc_decide(t_now, scenario, state, params, cfg, solver);
}

}  // namespace battsched
