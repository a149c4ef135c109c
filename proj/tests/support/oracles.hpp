#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "battsched/milp.hpp"
#include "battsched/model.hpp"

namespace battsched::testing {

// Random horizon problem: household-scale load and PV, buy prices in
// [0.1, 0.8], sell prices at or below buy.
inline MilpProblem random_problem(std::mt19937_64& gen, std::size_t horizon) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MilpProblem p;
  p.dt_hours = 1.0;
  p.initial_energy_kwh = p.params.e_min_kwh() + u(gen) * (p.params.e_max_kwh() - p.params.e_min_kwh());
  for (std::size_t t = 0; t < horizon; ++t) {
    p.load_kw.push_back(8.0 * u(gen));
    p.pv_kw.push_back(u(gen) < 0.4 ? 0.0 : 9.0 * u(gen));
    const double buy = 0.1 + 0.7 * u(gen);
    p.price_buy.push_back(buy);
    p.price_sell.push_back(buy * u(gen));
  }
  return p;
}

// Exact single-interval optimum. The cost is piecewise linear in the charge
// (or discharge) power with kinks only at 0, the PV/load mismatch and the cap,
// so the optimum is at one of those points.
inline double single_interval_optimum(const MilpProblem& p) {
  const double load = p.load_kw[0], pv = p.pv_kw[0], dt = p.dt_hours;
  const BatteryParams& b = p.params;
  const double e = p.initial_energy_kwh;
  const double ch_cap = std::min(b.charge_rate_kw, (b.e_max_kwh() - e) / (b.eff_charge * dt));
  const double dc_cap = std::min(b.discharge_rate_kw, b.eff_discharge * (e - b.e_min_kwh()) / dt);
  auto cost = [&](double ch, double dc) {
    return interval_cost(make_action(load, pv, ch, dc), p.price_buy[0], p.price_sell[0], dt);
  };
  double best = cost(0, 0);
  const double mismatch = std::abs(pv - load);
  for (double ch : {ch_cap, std::min(ch_cap, mismatch)}) best = std::min(best, cost(std::max(0.0, ch), 0));
  for (double dc : {dc_cap, std::min(dc_cap, mismatch)}) best = std::min(best, cost(0, std::max(0.0, dc)));
  return best;
}

}  // namespace battsched::testing
