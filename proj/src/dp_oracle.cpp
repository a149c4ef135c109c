#include <algorithm>
#include <cmath>
#include <limits>

#include "battsched/errors.hpp"
#include "battsched/milp.hpp"

namespace battsched {

MilpSolution solve_dp_oracle(const MilpProblem& problem, double soc_grid_kwh) {
  problem.validate();
  if (!(soc_grid_kwh > 0)) throw ValidationError("soc_grid_kwh must be > 0");

  const BatteryParams& p = problem.params;
  const double dt = problem.dt_hours;
  const double e0 = std::clamp(problem.initial_energy_kwh, p.e_min_kwh(), p.e_max_kwh());
  const std::size_t horizon = problem.horizon();
  constexpr double slack = 1e-9;

  // Lattice e0 + k * grid, k in [k_lo, k_hi].
  const auto k_lo = static_cast<long>(std::ceil((p.e_min_kwh() - e0) / soc_grid_kwh - slack));
  const auto k_hi = static_cast<long>(std::floor((p.e_max_kwh() - e0) / soc_grid_kwh + slack));
  const long states = k_hi - k_lo + 1;
  const long max_up = static_cast<long>(
      std::floor(p.charge_rate_kw * p.eff_charge * dt / soc_grid_kwh + slack));
  const long max_down = static_cast<long>(
      std::floor(p.discharge_rate_kw / p.eff_discharge * dt / soc_grid_kwh + slack));
  const long up = std::min(max_up, states - 1);
  const long down = std::min(max_down, states - 1);
  const long moves = up + down + 1;

  auto action_for = [&](std::size_t t, long delta) {
    const double energy_change = static_cast<double>(delta) * soc_grid_kwh;
    double ch = 0.0;
    double dc = 0.0;
    if (delta > 0) ch = std::min(energy_change / (p.eff_charge * dt), p.charge_rate_kw);
    if (delta < 0) dc = std::min(-energy_change * p.eff_discharge / dt, p.discharge_rate_kw);
    return make_action(problem.load_kw[t], problem.pv_kw[t], ch, dc);
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> next(static_cast<std::size_t>(states), 0.0);
  std::vector<double> current(static_cast<std::size_t>(states));
  std::vector<long> choice(horizon * static_cast<std::size_t>(states));
  std::vector<double> move_cost(static_cast<std::size_t>(moves));

  for (std::size_t step = horizon; step-- > 0;) {
    // Interval cost depends only on the energy change, not the start level.
    for (long m = 0; m < moves; ++m) {
      move_cost[static_cast<std::size_t>(m)] = interval_cost(
          action_for(step, m - down), problem.price_buy[step], problem.price_sell[step], dt);
    }
    long* row_choice = &choice[step * static_cast<std::size_t>(states)];
    for (long s = 0; s < states; ++s) {
      double best = inf;
      long best_move = 0;
      const long m_first = std::max(0L, down - s);
      const long m_last = std::min(moves - 1, down + (states - 1 - s));
      for (long m = m_first; m <= m_last; ++m) {
        const double value =
            move_cost[static_cast<std::size_t>(m)] + next[static_cast<std::size_t>(s + m - down)];
        if (value < best) {
          best = value;
          best_move = m - down;
        }
      }
      current[static_cast<std::size_t>(s)] = best;
      row_choice[s] = best_move;
    }
    std::swap(current, next);
  }

  MilpSolution sol;
  sol.status = SolveStatus::Optimal;
  sol.charge_kw.resize(horizon);
  sol.discharge_kw.resize(horizon);
  sol.grid_buy_kw.resize(horizon);
  sol.grid_sell_kw.resize(horizon);
  sol.energy_kwh.resize(horizon);
  long s = -k_lo;  // lattice index of e0
  double energy = e0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const long delta = choice[t * static_cast<std::size_t>(states) + static_cast<std::size_t>(s)];
    const DispatchAction a = action_for(t, delta);
    sol.charge_kw[t] = a.charge_kw;
    sol.discharge_kw[t] = a.discharge_kw;
    sol.grid_buy_kw[t] = a.grid_buy_kw;
    sol.grid_sell_kw[t] = a.grid_sell_kw;
    energy = energy - dt * (a.discharge_kw / p.eff_discharge - p.eff_charge * a.charge_kw);
    sol.energy_kwh[t] = energy;
    s += delta;
  }
  sol.objective = recompute_objective(problem, sol);
  sol.relaxation_objective = sol.objective;
  return sol;
}

}  // namespace battsched
