#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "battsched/lp.hpp"
#include "battsched/model.hpp"

namespace battsched {

/// Horizon dispatch problem: minimize sum_t (buy_t * B_t - sell_t * S_t) * dt
/// subject to power balance, rate limits gated by the binaries X_t
/// (discharge) and Y_t (charge) with X_t + Y_t <= 1, the storage recursion
/// and energy bounds.
struct MilpProblem {
  double dt_hours = 1.0;
  double initial_energy_kwh = 0.0;
  BatteryParams params;
  std::vector<double> load_kw;
  std::vector<double> pv_kw;
  std::vector<double> price_buy;
  std::vector<double> price_sell;

  std::size_t horizon() const { return load_kw.size(); }
  void validate() const;

  /// Window [first, first + length) of a scenario, starting from `energy_kwh`.
  static MilpProblem from_window(const ScenarioSeries& scenario, std::size_t first,
                                 std::size_t length, double energy_kwh,
                                 const BatteryParams& params);
};

enum class SolveStatus { Optimal, Infeasible };

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> charge_kw;
  std::vector<double> discharge_kw;
  std::vector<double> grid_buy_kw;
  std::vector<double> grid_sell_kw;
  // energy_kwh[t] is the stored energy at the end of interval t.
  std::vector<double> energy_kwh;

  // Branch-and-bound diagnostics.
  double relaxation_objective = 0.0;
  std::size_t nodes_explored = 0;
  bool fast_path = false;

  DispatchAction action(std::size_t t) const {
    return {charge_kw.at(t), discharge_kw.at(t), grid_buy_kw.at(t), grid_sell_kw.at(t)};
  }
};

/// Column layout of the LP built for a MilpProblem. Seven variables per
/// interval: buy, sell, charge, discharge, X (discharge on), Y (charge on),
/// energy.
struct MilpLayout {
  static constexpr std::size_t kPerInterval = 7;
  std::size_t horizon = 0;

  std::size_t buy(std::size_t t) const { return t * kPerInterval + 0; }
  std::size_t sell(std::size_t t) const { return t * kPerInterval + 1; }
  std::size_t charge(std::size_t t) const { return t * kPerInterval + 2; }
  std::size_t discharge(std::size_t t) const { return t * kPerInterval + 3; }
  std::size_t discharge_on(std::size_t t) const { return t * kPerInterval + 4; }
  std::size_t charge_on(std::size_t t) const { return t * kPerInterval + 5; }
  std::size_t energy(std::size_t t) const { return t * kPerInterval + 6; }
};

/// LP relaxation of the problem (binaries relaxed to [0, 1]).
lp::LinearProgram build_relaxation(const MilpProblem& problem);

/// Exact solver. Branch-and-bound over the binaries, most fractional first,
/// depth first with best-bound pruning. When the root relaxation already has
/// no interval with simultaneous charge and discharge it is accepted as is.
class MilpSolver {
 public:
  explicit MilpSolver(lp::Options options = {}) : lp_(options) {}

  MilpSolution solve(const MilpProblem& problem);

 private:
  lp::SimplexSolver lp_;
};

inline MilpSolution solve_milp(const MilpProblem& problem) { return MilpSolver().solve(problem); }

/// Recomputes sum_t (buy_t * B_t - sell_t * S_t) * dt from a solution.
double recompute_objective(const MilpProblem& problem, const MilpSolution& solution);

/// Writes the instance in CPLEX LP text format for cross-checking with
/// external solvers. Variable names are B_t, S_t, PCH_t, PDC_t, X_t, Y_t, E_t.
void write_lp_format(const MilpProblem& problem, std::ostream& out);

/// Backward dynamic program over stored energy restricted to the lattice
/// initial_energy + k * soc_grid_kwh. Independent of the LP path; its value
/// approaches the MILP optimum from above as the lattice is refined.
MilpSolution solve_dp_oracle(const MilpProblem& problem, double soc_grid_kwh);

}  // namespace battsched
