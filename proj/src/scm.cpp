#include "battsched/scm.hpp"

#include <cmath>

#include "battsched/errors.hpp"

namespace battsched {

void ScmConfig::validate() const {
  if (!(std::isfinite(deadband_kw) && deadband_kw >= 0)) {
    throw ValidationError("scm deadband_kw must be >= 0");
  }
}

DispatchAction scm_decide(double load_kw, double pv_kw, const BatteryState& state,
                          const BatteryParams& params, const ScmConfig& cfg, double dt_hours) {
  const double mismatch = pv_kw - load_kw;
  double charge = 0.0;
  double discharge = 0.0;
  if (mismatch > cfg.deadband_kw) {
    charge = charge_power_cap(load_kw, pv_kw, state, params, dt_hours);
  } else if (-mismatch > cfg.deadband_kw) {
    discharge = discharge_power_cap(load_kw, pv_kw, state, params, dt_hours);
  }
  return make_action(load_kw, pv_kw, charge, discharge);
}

}  // namespace battsched
