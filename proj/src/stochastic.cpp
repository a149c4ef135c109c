#include "battsched/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "battsched/errors.hpp"

namespace battsched {

void SrrConfig::validate() const {
  if (!(k_charge > 0) || !std::isfinite(k_charge)) throw ValidationError("k_charge must be > 0");
  if (!(k_discharge > 0) || !std::isfinite(k_discharge)) {
    throw ValidationError("k_discharge must be > 0");
  }
  if (!(epsilon > 0 && epsilon <= 1e-3)) throw ValidationError("epsilon must lie in (0, 1e-3]");
}

std::vector<double> normalize_prices(std::span<const double> prices) {
  if (prices.empty()) throw ValidationError("cannot normalize an empty price series");
  const auto [lo_it, hi_it] = std::minmax_element(prices.begin(), prices.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(prices.size(), 0.5);
  if (hi == lo) return out;
  const double span = hi - lo;
  for (std::size_t t = 0; t < prices.size(); ++t) {
    out[t] = std::clamp((prices[t] - lo) / span, 0.0, 1.0);
  }
  return out;
}

std::vector<double> modify_buy_prices(std::span<const double> price_buy,
                                      std::span<const double> load_kw,
                                      std::span<const double> pv_kw) {
  if (price_buy.size() != load_kw.size() || price_buy.size() != pv_kw.size()) {
    throw ValidationError("price, load and pv series must have identical lengths");
  }
  if (price_buy.empty()) return {};
  const double lowest = *std::min_element(price_buy.begin(), price_buy.end());
  std::vector<double> out(price_buy.begin(), price_buy.end());
  for (std::size_t t = 0; t < out.size(); ++t) {
    if (pv_kw[t] > load_kw[t]) out[t] = lowest;
  }
  return out;
}

NormalizedPrices NormalizedPrices::from_scenario(const ScenarioSeries& scenario) {
  NormalizedPrices norm;
  norm.buy_norm = normalize_prices(scenario.price_buy);
  norm.sell_norm = normalize_prices(scenario.price_sell);
  norm.buy_modified_norm =
      normalize_prices(modify_buy_prices(scenario.price_buy, scenario.load_kw, scenario.pv_kw));
  return norm;
}

double srr_charge(double rho_buy, const SrrConfig& cfg) {
  return 1.0 - std::exp(-cfg.k_charge * (1.0 - rho_buy) / (rho_buy + cfg.epsilon));
}

double srr_discharge(double rho_sell, const SrrConfig& cfg) {
  return 1.0 - std::exp(-cfg.k_discharge * rho_sell / (1.0 - rho_sell + cfg.epsilon));
}

}  // namespace battsched
