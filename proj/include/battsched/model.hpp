#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace battsched {

/// Nameplate battery characteristics. Energies in kWh, powers in kW,
/// efficiencies and SoC values dimensionless.
struct BatteryParams {
  double nominal_capacity_kwh = 13.5;
  double charge_rate_kw = 7.0;
  double discharge_rate_kw = 7.0;
  double eff_charge = 0.97;
  double eff_discharge = 1.0;
  double soc_max = 0.9;
  double soc_min = 0.1;
  double soc_init = 0.3;

  double e_max_kwh() const { return nominal_capacity_kwh * soc_max; }
  double e_min_kwh() const { return nominal_capacity_kwh * soc_min; }
  double e_init_kwh() const { return nominal_capacity_kwh * soc_init; }

  /// Throws ValidationError naming the first broken invariant.
  void validate() const;

  /// 13.5 kWh residential battery with 7 kW charge and discharge rates.
  static BatteryParams reference() { return {}; }
};

struct BatteryState {
  double energy_kwh = 0.0;
};

/// Aligned per-interval series. Prices are currency per kWh.
struct ScenarioSeries {
  double dt_hours = 1.0;
  std::vector<double> load_kw;
  std::vector<double> pv_kw;
  std::vector<double> price_buy;
  std::vector<double> price_sell;
  // Optional ISO-8601 labels, one per interval; empty when not known.
  std::vector<std::string> timestamps;

  std::size_t size() const { return load_kw.size(); }
  void validate() const;
};

/// One interval's dispatch. All fields are non-negative; grid_buy/grid_sell
/// follow buy - sell + pv + discharge - charge = load.
struct DispatchAction {
  double charge_kw = 0.0;
  double discharge_kw = 0.0;
  double grid_buy_kw = 0.0;
  double grid_sell_kw = 0.0;

  bool idle() const { return charge_kw == 0.0 && discharge_kw == 0.0; }
};

inline constexpr double kBoundsToleranceKwh = 1e-6;

/// Advances stored energy by one interval:
///   E' = E - dt * (discharge / eff_discharge - eff_charge * charge).
/// Results within kBoundsToleranceKwh of a bound are snapped onto it; anything
/// further out raises BoundsViolation.
BatteryState step_battery(const BatteryState& state, const DispatchAction& action,
                          const BatteryParams& params, double dt_hours,
                          double tolerance_kwh = kBoundsToleranceKwh);

struct GridFlow {
  double buy_kw = 0.0;
  double sell_kw = 0.0;
};

GridFlow split_grid(double load_kw, double pv_kw, double charge_kw, double discharge_kw);

/// Fills grid_buy_kw / grid_sell_kw from the battery powers.
DispatchAction make_action(double load_kw, double pv_kw, double charge_kw, double discharge_kw);

double interval_cost(const DispatchAction& action, double price_buy, double price_sell,
                     double dt_hours);

/// Running cost record; total is accumulated strictly left to right.
class CostLedger {
 public:
  void add(double cost) {
    per_interval_.push_back(cost);
    total_ += cost;
  }
  double total() const { return total_; }
  const std::vector<double>& per_interval() const { return per_interval_; }

 private:
  std::vector<double> per_interval_;
  double total_ = 0.0;
};

/// Maximum charge power per the battery's rate and headroom; with a PV surplus
/// the charge is also capped at pv - load.
double charge_power_cap(double load_kw, double pv_kw, const BatteryState& state,
                        const BatteryParams& params, double dt_hours);

/// Maximum discharge power per rate and available energy; with a deficit the
/// discharge is also capped at load - pv.
double discharge_power_cap(double load_kw, double pv_kw, const BatteryState& state,
                           const BatteryParams& params, double dt_hours);

/// Cost of running the scenario with the battery left idle.
double baseline_cost(const ScenarioSeries& scenario);

}  // namespace battsched
