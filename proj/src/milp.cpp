#include "battsched/milp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "battsched/errors.hpp"

namespace battsched {

namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr double kSimultaneityTol = 1e-9;
constexpr double kPruneTol = 1e-9;

struct Fixing {
  std::size_t var;
  double value;
};

struct Node {
  std::vector<Fixing> fixings;
  double parent_bound;
};

}  // namespace

void MilpProblem::validate() const {
  params.validate();
  const std::size_t n = load_kw.size();
  if (n == 0) throw ValidationError("MILP horizon must be >= 1");
  if (pv_kw.size() != n || price_buy.size() != n || price_sell.size() != n) {
    throw ValidationError("MILP window arrays must have identical lengths");
  }
  if (!(dt_hours > 0)) throw ValidationError("MILP dt_hours must be > 0");
  const double tol = kBoundsToleranceKwh;
  if (initial_energy_kwh < params.e_min_kwh() - tol ||
      initial_energy_kwh > params.e_max_kwh() + tol) {
    throw ValidationError("initial energy outside [e_min, e_max]");
  }
}

MilpProblem MilpProblem::from_window(const ScenarioSeries& scenario, std::size_t first,
                                     std::size_t length, double energy_kwh,
                                     const BatteryParams& params) {
  if (first >= scenario.size() || length == 0 || first + length > scenario.size()) {
    throw ValidationError("MILP window outside the scenario");
  }
  auto slice = [&](const std::vector<double>& v) {
    return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(first),
                               v.begin() + static_cast<std::ptrdiff_t>(first + length));
  };
  MilpProblem problem;
  problem.dt_hours = scenario.dt_hours;
  problem.initial_energy_kwh = energy_kwh;
  problem.params = params;
  problem.load_kw = slice(scenario.load_kw);
  problem.pv_kw = slice(scenario.pv_kw);
  problem.price_buy = slice(scenario.price_buy);
  problem.price_sell = slice(scenario.price_sell);
  return problem;
}

lp::LinearProgram build_relaxation(const MilpProblem& problem) {
  const std::size_t horizon = problem.horizon();
  const MilpLayout at{horizon};
  const BatteryParams& p = problem.params;
  const double dt = problem.dt_hours;

  lp::LinearProgram model(horizon * MilpLayout::kPerInterval);
  for (std::size_t t = 0; t < horizon; ++t) {
    model.cost[at.buy(t)] = problem.price_buy[t] * dt;
    model.cost[at.sell(t)] = -problem.price_sell[t] * dt;

    model.upper[at.charge(t)] = p.charge_rate_kw;
    model.upper[at.discharge(t)] = p.discharge_rate_kw;
    model.upper[at.discharge_on(t)] = 1.0;
    model.upper[at.charge_on(t)] = 1.0;
    model.lower[at.energy(t)] = p.e_min_kwh();
    model.upper[at.energy(t)] = p.e_max_kwh();
  }

  // Clamp the start into bounds so tolerance-level noise cannot make the
  // first interval infeasible.
  const double e0 = std::clamp(problem.initial_energy_kwh, p.e_min_kwh(), p.e_max_kwh());
  for (std::size_t t = 0; t < horizon; ++t) {
    // B - S + P_DC - P_CH = load - pv
    model.add_row({{at.buy(t), 1.0}, {at.sell(t), -1.0}, {at.discharge(t), 1.0},
                   {at.charge(t), -1.0}},
                  lp::RowSense::Equal, problem.load_kw[t] - problem.pv_kw[t]);
    // E_t - E_{t-1} + dt / eta_d * P_DC - dt * eta_c * P_CH = 0
    if (t == 0) {
      model.add_row({{at.energy(t), 1.0}, {at.discharge(t), dt / p.eff_discharge},
                     {at.charge(t), -dt * p.eff_charge}},
                    lp::RowSense::Equal, e0);
    } else {
      model.add_row({{at.energy(t), 1.0}, {at.energy(t - 1), -1.0},
                     {at.discharge(t), dt / p.eff_discharge}, {at.charge(t), -dt * p.eff_charge}},
                    lp::RowSense::Equal, 0.0);
    }
    model.add_row({{at.discharge(t), 1.0}, {at.discharge_on(t), -p.discharge_rate_kw}},
                  lp::RowSense::LessEqual, 0.0);
    model.add_row({{at.charge(t), 1.0}, {at.charge_on(t), -p.charge_rate_kw}},
                  lp::RowSense::LessEqual, 0.0);
    model.add_row({{at.discharge_on(t), 1.0}, {at.charge_on(t), 1.0}}, lp::RowSense::LessEqual,
                  1.0);
  }
  return model;
}

double recompute_objective(const MilpProblem& problem, const MilpSolution& solution) {
  double total = 0.0;
  for (std::size_t t = 0; t < problem.horizon(); ++t) {
    total += interval_cost(solution.action(t), problem.price_buy[t], problem.price_sell[t],
                           problem.dt_hours);
  }
  return total;
}

namespace {

// Turns an LP point without simultaneous charge/discharge into a clean
// schedule: battery powers snapped to their bounds, energy replayed through
// the storage recursion, grid flows netted.
MilpSolution extract(const MilpProblem& problem, const std::vector<double>& x) {
  const std::size_t horizon = problem.horizon();
  const MilpLayout at{horizon};
  const BatteryParams& p = problem.params;
  MilpSolution sol;
  sol.status = SolveStatus::Optimal;
  sol.charge_kw.resize(horizon);
  sol.discharge_kw.resize(horizon);
  sol.grid_buy_kw.resize(horizon);
  sol.grid_sell_kw.resize(horizon);
  sol.energy_kwh.resize(horizon);

  double energy = std::clamp(problem.initial_energy_kwh, p.e_min_kwh(), p.e_max_kwh());
  for (std::size_t t = 0; t < horizon; ++t) {
    double ch = std::clamp(x[at.charge(t)], 0.0, p.charge_rate_kw);
    double dc = std::clamp(x[at.discharge(t)], 0.0, p.discharge_rate_kw);
    if (ch <= dc) {
      ch = ch <= kSimultaneityTol ? 0.0 : ch;
    } else {
      dc = dc <= kSimultaneityTol ? 0.0 : dc;
    }
    if (ch < 1e-12) ch = 0.0;
    if (dc < 1e-12) dc = 0.0;
    const DispatchAction action = make_action(problem.load_kw[t], problem.pv_kw[t], ch, dc);
    sol.charge_kw[t] = action.charge_kw;
    sol.discharge_kw[t] = action.discharge_kw;
    sol.grid_buy_kw[t] = action.grid_buy_kw;
    sol.grid_sell_kw[t] = action.grid_sell_kw;
    energy = energy - problem.dt_hours * (dc / p.eff_discharge - p.eff_charge * ch);
    sol.energy_kwh[t] = energy;
  }
  sol.objective = recompute_objective(problem, sol);
  return sol;
}

}  // namespace

MilpSolution MilpSolver::solve(const MilpProblem& problem) {
  problem.validate();
  const std::size_t horizon = problem.horizon();
  const MilpLayout at{horizon};
  const lp::LinearProgram root = build_relaxation(problem);

  lp::LinearProgram node_lp = root;
  double incumbent_value = lp::kInf;
  std::vector<double> incumbent_x;
  double relaxation = 0.0;
  std::size_t explored = 0;
  bool fast_path = false;

  std::vector<Node> stack;
  stack.push_back(Node{{}, -lp::kInf});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.parent_bound >= incumbent_value - kPruneTol) continue;

    node_lp.lower = root.lower;
    node_lp.upper = root.upper;
    for (const Fixing& f : node.fixings) {
      node_lp.lower[f.var] = f.value;
      node_lp.upper[f.var] = f.value;
    }
    const lp::Result relaxed = lp_.solve(node_lp);
    ++explored;
    if (explored == 1) {
      if (relaxed.status != lp::Status::Optimal) {
        std::ostringstream os;
        os << "root relaxation is " << lp::to_string(relaxed.status)
           << "; the idle schedule should always be feasible";
        throw InfeasibleProblem(os.str());
      }
      relaxation = relaxed.objective;
    }
    if (relaxed.status != lp::Status::Optimal) continue;
    if (relaxed.objective >= incumbent_value - kPruneTol) continue;

    // Most fractional binary among intervals that charge and discharge at once.
    std::size_t branch_var = root.num_vars();
    double branch_value = 0.0;
    double best_fraction = kIntegralityTol;
    for (std::size_t t = 0; t < horizon; ++t) {
      if (std::min(relaxed.x[at.charge(t)], relaxed.x[at.discharge(t)]) <= kSimultaneityTol) {
        continue;
      }
      for (std::size_t var : {at.discharge_on(t), at.charge_on(t)}) {
        const double v = relaxed.x[var];
        const double fraction = std::min(v, 1.0 - v);
        if (fraction > best_fraction) {
          best_fraction = fraction;
          branch_var = var;
          branch_value = v;
        }
      }
    }

    if (branch_var == root.num_vars()) {
      incumbent_value = relaxed.objective;
      incumbent_x = relaxed.x;
      if (explored == 1) fast_path = true;
      continue;
    }

    // Depth first: push the far child first so the nearer rounding pops next.
    const double near = branch_value >= 0.5 ? 1.0 : 0.0;
    for (double value : {1.0 - near, near}) {
      Node child{node.fixings, relaxed.objective};
      child.fixings.push_back(Fixing{branch_var, value});
      stack.push_back(std::move(child));
    }
  }

  if (incumbent_x.empty()) {
    throw InfeasibleProblem("branch-and-bound found no integer-feasible schedule");
  }
  MilpSolution sol = extract(problem, incumbent_x);
  sol.relaxation_objective = relaxation;
  sol.nodes_explored = explored;
  sol.fast_path = fast_path;
  return sol;
}

void write_lp_format(const MilpProblem& problem, std::ostream& out) {
  const std::size_t horizon = problem.horizon();
  const BatteryParams& p = problem.params;
  const double dt = problem.dt_hours;
  const auto old_precision = out.precision(17);

  out << "\\ battery dispatch horizon, T = " << horizon << ", dt = " << dt << " h\n";
  out << "Minimize\n obj:";
  for (std::size_t t = 0; t < horizon; ++t) {
    out << " + " << problem.price_buy[t] * dt << " B_" << t << " - "
        << problem.price_sell[t] * dt << " S_" << t;
  }
  out << "\nSubject To\n";
  for (std::size_t t = 0; t < horizon; ++t) {
    out << " balance_" << t << ": B_" << t << " - S_" << t << " + PDC_" << t << " - PCH_" << t
        << " = " << problem.load_kw[t] - problem.pv_kw[t] << "\n";
    out << " storage_" << t << ": E_" << t;
    if (t > 0) out << " - E_" << t - 1;
    out << " + " << dt / p.eff_discharge << " PDC_" << t << " - " << dt * p.eff_charge << " PCH_"
        << t << " = " << (t == 0 ? problem.initial_energy_kwh : 0.0) << "\n";
    out << " dc_rate_" << t << ": PDC_" << t << " - " << p.discharge_rate_kw << " X_" << t
        << " <= 0\n";
    out << " ch_rate_" << t << ": PCH_" << t << " - " << p.charge_rate_kw << " Y_" << t
        << " <= 0\n";
    out << " exclusive_" << t << ": X_" << t << " + Y_" << t << " <= 1\n";
  }
  out << "Bounds\n";
  for (std::size_t t = 0; t < horizon; ++t) {
    out << " 0 <= PCH_" << t << " <= " << p.charge_rate_kw << "\n";
    out << " 0 <= PDC_" << t << " <= " << p.discharge_rate_kw << "\n";
    out << " " << p.e_min_kwh() << " <= E_" << t << " <= " << p.e_max_kwh() << "\n";
  }
  out << "Binaries\n";
  for (std::size_t t = 0; t < horizon; ++t) out << " X_" << t << " Y_" << t << "\n";
  out << "End\n";
  out.precision(old_precision);
}

}  // namespace battsched
