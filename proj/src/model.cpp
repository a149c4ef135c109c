#include "battsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "battsched/errors.hpp"

namespace battsched {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void BatteryParams::validate() const {
  require(finite(nominal_capacity_kwh) && nominal_capacity_kwh > 0,
          "nominal_capacity_kwh must be > 0");
  require(finite(charge_rate_kw) && charge_rate_kw > 0, "charge_rate_kw must be > 0");
  require(finite(discharge_rate_kw) && discharge_rate_kw > 0, "discharge_rate_kw must be > 0");
  require(eff_charge > 0 && eff_charge <= 1, "eff_charge must lie in (0, 1]");
  require(eff_discharge > 0 && eff_discharge <= 1, "eff_discharge must lie in (0, 1]");
  require(soc_min >= 0 && soc_min < soc_max && soc_max <= 1,
          "soc bounds must satisfy 0 <= soc_min < soc_max <= 1");
  require(soc_init >= soc_min && soc_init <= soc_max,
          "soc_init must lie in [soc_min, soc_max]");
}

void ScenarioSeries::validate() const {
  const std::size_t n = load_kw.size();
  require(finite(dt_hours) && dt_hours > 0, "dt_hours must be > 0");
  require(n >= 1, "scenario must contain at least one interval");
  require(pv_kw.size() == n && price_buy.size() == n && price_sell.size() == n,
          "scenario series must have identical lengths");
  require(timestamps.empty() || timestamps.size() == n,
          "timestamps must be empty or match the series length");
  for (std::size_t t = 0; t < n; ++t) {
    auto where = [t](const char* what) {
      std::ostringstream os;
      os << what << " at interval " << t;
      return os.str();
    };
    require(finite(load_kw[t]) && load_kw[t] >= 0, where("load_kw must be finite and >= 0"));
    require(finite(pv_kw[t]) && pv_kw[t] >= 0, where("pv_kw must be finite and >= 0"));
    require(finite(price_buy[t]) && finite(price_sell[t]), where("prices must be finite"));
    require(price_sell[t] <= price_buy[t], where("price_sell must not exceed price_buy"));
  }
}

BatteryState step_battery(const BatteryState& state, const DispatchAction& action,
                          const BatteryParams& params, double dt_hours, double tolerance_kwh) {
  const double rate_slack = 1e-9;
  if (action.charge_kw < 0 || action.discharge_kw < 0 ||
      action.charge_kw > params.charge_rate_kw + rate_slack ||
      action.discharge_kw > params.discharge_rate_kw + rate_slack) {
    std::ostringstream os;
    os << "action outside rate limits: charge " << action.charge_kw << " kW, discharge "
       << action.discharge_kw << " kW";
    throw BoundsViolation(os.str());
  }
  if (action.charge_kw > 0 && action.discharge_kw > 0) {
    throw BoundsViolation("simultaneous charge and discharge");
  }

  double energy = state.energy_kwh - dt_hours * (action.discharge_kw / params.eff_discharge -
                                                 params.eff_charge * action.charge_kw);
  const double lo = params.e_min_kwh();
  const double hi = params.e_max_kwh();
  if (energy < lo - tolerance_kwh || energy > hi + tolerance_kwh) {
    std::ostringstream os;
    os.precision(12);
    os << "battery energy " << energy << " kWh outside [" << lo << ", " << hi << "]";
    throw BoundsViolation(os.str());
  }
  return BatteryState{std::clamp(energy, lo, hi)};
}

GridFlow split_grid(double load_kw, double pv_kw, double charge_kw, double discharge_kw) {
  const double net = load_kw - pv_kw - discharge_kw + charge_kw;
  if (net >= 0) return {net, 0.0};
  return {0.0, -net};
}

DispatchAction make_action(double load_kw, double pv_kw, double charge_kw, double discharge_kw) {
  const GridFlow grid = split_grid(load_kw, pv_kw, charge_kw, discharge_kw);
  return DispatchAction{charge_kw, discharge_kw, grid.buy_kw, grid.sell_kw};
}

double interval_cost(const DispatchAction& action, double price_buy, double price_sell,
                     double dt_hours) {
  return (price_buy * action.grid_buy_kw - price_sell * action.grid_sell_kw) * dt_hours;
}

double charge_power_cap(double load_kw, double pv_kw, const BatteryState& state,
                        const BatteryParams& params, double dt_hours) {
  const double headroom = std::max(0.0, params.e_max_kwh() - state.energy_kwh);
  double cap = std::min(params.charge_rate_kw, headroom / (params.eff_charge * dt_hours));
  if (pv_kw > load_kw) cap = std::min(cap, pv_kw - load_kw);
  return cap;
}

double discharge_power_cap(double load_kw, double pv_kw, const BatteryState& state,
                           const BatteryParams& params, double dt_hours) {
  const double available = std::max(0.0, state.energy_kwh - params.e_min_kwh());
  double cap = std::min(params.discharge_rate_kw, params.eff_discharge * available / dt_hours);
  if (load_kw > pv_kw) cap = std::min(cap, load_kw - pv_kw);
  return cap;
}

double baseline_cost(const ScenarioSeries& scenario) {
  double total = 0.0;
  for (std::size_t t = 0; t < scenario.size(); ++t) {
    const DispatchAction idle = make_action(scenario.load_kw[t], scenario.pv_kw[t], 0.0, 0.0);
    total += interval_cost(idle, scenario.price_buy[t], scenario.price_sell[t], scenario.dt_hours);
  }
  return total;
}

}  // namespace battsched
