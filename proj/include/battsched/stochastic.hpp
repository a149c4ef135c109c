#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "battsched/model.hpp"

namespace battsched {

/// Shape parameters of the request-rate curves.
struct SrrConfig {
  double k_charge = 0.3;
  double k_discharge = 0.3;
  double epsilon = 1e-6;

  void validate() const;
};

/// Min-max normalization onto [0, 1]. A constant series maps to 0.5.
std::vector<double> normalize_prices(std::span<const double> prices);

/// Replaces the buy price by the series minimum wherever PV exceeds load, so
/// surplus intervals look like the cheapest time to charge.
std::vector<double> modify_buy_prices(std::span<const double> price_buy,
                                      std::span<const double> load_kw,
                                      std::span<const double> pv_kw);

struct NormalizedPrices {
  std::vector<double> buy_norm;
  std::vector<double> sell_norm;
  std::vector<double> buy_modified_norm;

  static NormalizedPrices from_scenario(const ScenarioSeries& scenario);
};

/// Probability of a charge request: 1 - exp(-k (1 - rho) / (rho + eps)).
/// Falls from 1 at rho = 0 to 0 at rho = 1.
double srr_charge(double rho_buy, const SrrConfig& cfg);

/// Probability of a discharge request: 1 - exp(-k rho / (1 - rho + eps)).
/// Rises from 0 at rho = 0 to 1 at rho = 1.
double srr_discharge(double rho_sell, const SrrConfig& cfg);

/// Charge/discharge/idle decision for interval t. `draw` yields uniforms on
/// [0, 1); a second value is drawn only when the charge request is rejected.
/// Power follows the rate, headroom and PV-mismatch caps of charge_power_cap
/// and discharge_power_cap.
template <class Draw>
DispatchAction stochastic_decide(std::size_t t, const NormalizedPrices& norm, double load_kw,
                                 double pv_kw, const BatteryState& state,
                                 const BatteryParams& params, const SrrConfig& cfg,
                                 double dt_hours, Draw&& draw) {
  if (draw() < srr_charge(norm.buy_modified_norm[t], cfg)) {
    return make_action(load_kw, pv_kw, charge_power_cap(load_kw, pv_kw, state, params, dt_hours),
                       0.0);
  }
  if (draw() < srr_discharge(norm.sell_norm[t], cfg)) {
    return make_action(load_kw, pv_kw, 0.0,
                       discharge_power_cap(load_kw, pv_kw, state, params, dt_hours));
  }
  return make_action(load_kw, pv_kw, 0.0, 0.0);
}

}  // namespace battsched
