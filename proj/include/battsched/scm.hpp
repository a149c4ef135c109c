#pragma once

#include "battsched/model.hpp"

namespace battsched {

struct ScmConfig {
  // Mismatch |pv - load| at or below which the battery stays idle (kW).
  double deadband_kw = 0.1;

  void validate() const;
};

/// Self-consumption rule: store PV surplus, cover deficits from the battery.
/// Never charges from the grid and never exports stored energy.
DispatchAction scm_decide(double load_kw, double pv_kw, const BatteryState& state,
                          const BatteryParams& params, const ScmConfig& cfg, double dt_hours);

}  // namespace battsched
