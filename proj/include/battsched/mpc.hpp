#pragma once

#include <cstddef>

#include "battsched/milp.hpp"
#include "battsched/model.hpp"

namespace battsched {

struct MpcConfig {
  std::size_t horizon = 24;  // intervals
  void validate() const;
};

/// Intervals planned when deciding interval `t_now`: the horizon, shrunk so
/// the window never runs past the end of the data.
std::size_t mpc_window_length(std::size_t t_now, std::size_t total, std::size_t horizon);

/// Receding-horizon decision for interval `t_now`: solve the window starting
/// at `t_now` with perfect foresight and apply its first interval only.
DispatchAction mpc_decide(std::size_t t_now, const ScenarioSeries& scenario,
                          const BatteryState& state, const BatteryParams& params,
                          const MpcConfig& cfg, MilpSolver& solver);

DispatchAction mpc_decide(std::size_t t_now, const ScenarioSeries& scenario,
                          const BatteryState& state, const BatteryParams& params,
                          const MpcConfig& cfg);

}  // namespace battsched
