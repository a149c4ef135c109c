#include "battsched/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "battsched/errors.hpp"

namespace battsched::lp {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

std::size_t LinearProgram::add_row(std::initializer_list<std::pair<std::size_t, double>> terms,
                                   RowSense sense, double rhs) {
  std::vector<double> coeffs(num_vars(), 0.0);
  for (const auto& [index, value] : terms) coeffs.at(index) += value;
  return add_row(std::move(coeffs), sense, rhs);
}

std::size_t LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
  if (coeffs.size() != num_vars()) throw ValidationError("row width does not match variable count");
  rows.push_back(Row{std::move(coeffs), sense, rhs});
  return rows.size() - 1;
}

Result SimplexSolver::solve(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.num_rows();
  if (lp.lower.size() != n || lp.upper.size() != n) {
    throw ValidationError("bound vectors do not match variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(lp.lower[j] <= lp.upper[j]) || std::isnan(lp.cost[j]) || !std::isfinite(lp.cost[j])) {
      throw ValidationError("inconsistent bounds or non-finite cost");
    }
  }

  structural_ = n;
  rows_ = m;
  iterations_ = 0;

  // Nonbasic starting point for the structurals.
  std::vector<double> start(n);
  std::vector<VarState> start_state(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j])) {
      start[j] = lp.lower[j];
      start_state[j] = VarState::AtLower;
    } else if (std::isfinite(lp.upper[j])) {
      start[j] = lp.upper[j];
      start_state[j] = VarState::AtUpper;
    } else {
      start[j] = 0.0;
      start_state[j] = VarState::FreeZero;
    }
  }

  // Decide per row whether its slack can start basic or an artificial is needed.
  std::vector<double> residual(m);
  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  std::vector<bool> needs_artificial(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    double r = row.rhs;
    for (std::size_t j = 0; j < n; ++j) r -= row.coeffs[j] * start[j];
    residual[i] = r;
    switch (row.sense) {
      case RowSense::LessEqual:
        ++slack_count;
        needs_artificial[i] = r < 0;
        break;
      case RowSense::GreaterEqual:
        ++slack_count;
        needs_artificial[i] = r > 0;
        break;
      case RowSense::Equal:
        needs_artificial[i] = true;
        break;
    }
    if (needs_artificial[i]) ++artificial_count;
  }

  first_artificial_ = n + slack_count;
  cols_ = first_artificial_ + artificial_count;
  tableau_.assign(rows_ * cols_, 0.0);
  value_.assign(cols_, 0.0);
  lo_.assign(cols_, 0.0);
  hi_.assign(cols_, kInf);
  column_sign_.assign(cols_, 0.0);
  owner_row_.assign(cols_, 0);
  state_.assign(cols_, VarState::AtLower);
  beta_.assign(rows_, 0.0);
  basis_.assign(rows_, 0);

  for (std::size_t j = 0; j < n; ++j) {
    lo_[j] = lp.lower[j];
    hi_[j] = lp.upper[j];
    value_[j] = start[j];
    state_[j] = start_state[j];
  }

  std::size_t next_slack = n;
  std::size_t next_artificial = first_artificial_;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    std::size_t slack = cols_;
    if (row.sense != RowSense::Equal) {
      slack = next_slack++;
      column_sign_[slack] = row.sense == RowSense::LessEqual ? 1.0 : -1.0;
      owner_row_[slack] = i;
    }
    std::size_t basic;
    double sign;
    if (needs_artificial[i]) {
      basic = next_artificial++;
      sign = residual[i] >= 0 ? 1.0 : -1.0;
      column_sign_[basic] = sign;
      owner_row_[basic] = i;
    } else {
      basic = slack;
      sign = column_sign_[slack];
    }
    // Basis is diagonal with entries +-1, so B^-1 A is each row times its sign.
    double* dst = &tableau_[i * cols_];
    for (std::size_t j = 0; j < n; ++j) dst[j] = sign * row.coeffs[j];
    if (slack < cols_) dst[slack] = sign * column_sign_[slack];
    if (basic != slack) dst[basic] = 1.0;
    basis_[i] = basic;
    state_[basic] = VarState::Basic;
    beta_[i] = std::abs(residual[i]);
    value_[basic] = 0.0;
  }

  Result result;
  if (artificial_count > 0) {
    std::vector<double> phase_one_costs(cols_, 0.0);
    for (std::size_t j = first_artificial_; j < cols_; ++j) phase_one_costs[j] = 1.0;
    compute_reduced_costs(phase_one_costs);
    iterate(true);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] >= first_artificial_) infeasibility += beta_[i];
    }
    if (infeasibility > options_.feasibility_tol * static_cast<double>(std::max<std::size_t>(1, m))) {
      result.status = Status::Infeasible;
      result.iterations = iterations_;
      return result;
    }
    drive_out_artificials();
  }

  std::vector<double> costs(cols_, 0.0);
  std::copy(lp.cost.begin(), lp.cost.end(), costs.begin());
  compute_reduced_costs(costs);
  if (!iterate(false)) {
    result.status = Status::Unbounded;
    result.iterations = iterations_;
    return result;
  }

  polish(lp);

  result.status = Status::Optimal;
  result.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (state_[j] != VarState::Basic) result.x[j] = value_[j];
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (basis_[i] < n) result.x[basis_[i]] = beta_[i];
  }
  double objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) objective += lp.cost[j] * result.x[j];
  result.objective = objective;
  result.iterations = iterations_;
  return result;
}

void SimplexSolver::compute_reduced_costs(const std::vector<double>& costs) {
  reduced_ = costs;
  for (std::size_t i = 0; i < rows_; ++i) {
    const double cb = costs[basis_[i]];
    if (cb == 0.0) continue;
    const double* row = &tableau_[i * cols_];
    for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= cb * row[j];
  }
  for (std::size_t i = 0; i < rows_; ++i) reduced_[basis_[i]] = 0.0;
}

// Returns false when the phase-two objective is unbounded below.
bool SimplexSolver::iterate(bool phase_one) {
  const double tol = options_.optimality_tol;
  bool bland = false;
  std::size_t degenerate_run = 0;

  for (;;) {
    if (iterations_ >= options_.max_iterations) {
      std::ostringstream os;
      os << "simplex iteration limit (" << options_.max_iterations << ") reached";
      throw NumericalFailure(os.str());
    }

    // Pricing.
    std::size_t entering = cols_;
    double direction = 0.0;
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      const VarState s = state_[j];
      if (s == VarState::Basic || s == VarState::Dropped) continue;
      if (lo_[j] == hi_[j]) continue;
      const double d = reduced_[j];
      double dir = 0.0;
      if (d < -tol && (s == VarState::AtLower || s == VarState::FreeZero)) dir = 1.0;
      if (d > tol && (s == VarState::AtUpper || s == VarState::FreeZero)) dir = -1.0;
      if (dir == 0.0) continue;
      if (bland) {
        entering = j;
        direction = dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = j;
        direction = dir;
      }
    }
    if (entering == cols_) return true;

    // Ratio test.
    double theta = hi_[entering] - lo_[entering];  // bound flip
    std::size_t leave_row = rows_;
    double leave_pivot = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double a = tableau_[i * cols_ + entering];
      if (std::abs(a) <= options_.pivot_tol) continue;
      const std::size_t k = basis_[i];
      const double rate = -direction * a;  // change of basic var per unit step
      double limit;
      if (rate < 0) {
        if (!std::isfinite(lo_[k])) continue;
        limit = std::max(0.0, beta_[i] - lo_[k]) / -rate;
      } else {
        if (!std::isfinite(hi_[k])) continue;
        limit = std::max(0.0, hi_[k] - beta_[i]) / rate;
      }
      bool take = false;
      if (limit < theta - 1e-12) {
        take = true;
      } else if (limit <= theta + 1e-12 && leave_row != rows_) {
        take = bland ? k < basis_[leave_row] : std::abs(a) > std::abs(leave_pivot);
      } else if (limit <= theta && leave_row == rows_) {
        take = true;
      }
      if (take) {
        theta = limit;
        leave_row = i;
        leave_pivot = a;
      }
    }

    if (!std::isfinite(theta)) {
      if (phase_one) throw NumericalFailure("phase one reported an unbounded ray");
      return false;
    }

    ++iterations_;
    if (theta <= 1e-12) {
      if (++degenerate_run > options_.degenerate_limit) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    const double step = direction * theta;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double a = tableau_[i * cols_ + entering];
      if (a != 0.0) beta_[i] -= step * a;
    }
    const double entering_value = value_[entering] + step;

    if (leave_row == rows_) {
      // Entering variable moves to its opposite bound without a basis change.
      if (direction > 0) {
        state_[entering] = VarState::AtUpper;
        value_[entering] = hi_[entering];
      } else {
        state_[entering] = VarState::AtLower;
        value_[entering] = lo_[entering];
      }
      continue;
    }

    const std::size_t leaving = basis_[leave_row];
    const double rate = -direction * leave_pivot;
    if (phase_one && leaving >= first_artificial_) {
      state_[leaving] = VarState::Dropped;
      value_[leaving] = 0.0;
    } else if (rate < 0) {
      state_[leaving] = VarState::AtLower;
      value_[leaving] = lo_[leaving];
    } else {
      state_[leaving] = VarState::AtUpper;
      value_[leaving] = hi_[leaving];
    }
    pivot(leave_row, entering);
    beta_[leave_row] = entering_value;
  }
}

void SimplexSolver::pivot(std::size_t row, std::size_t col) {
  double* pivot_row = &tableau_[row * cols_];
  const double inv = 1.0 / pivot_row[col];
  nonzero_.clear();
  for (std::size_t j = 0; j < cols_; ++j) {
    if (pivot_row[j] == 0.0) continue;
    if (state_[j] == VarState::Dropped) {
      pivot_row[j] = 0.0;
      continue;
    }
    pivot_row[j] *= inv;
    nonzero_.push_back(j);
  }
  pivot_row[col] = 1.0;

  for (std::size_t i = 0; i < rows_; ++i) {
    if (i == row) continue;
    double* target = &tableau_[i * cols_];
    const double factor = target[col];
    if (factor == 0.0) continue;
    for (std::size_t j : nonzero_) target[j] -= factor * pivot_row[j];
    target[col] = 0.0;
  }
  const double factor = reduced_[col];
  if (factor != 0.0) {
    for (std::size_t j : nonzero_) reduced_[j] -= factor * pivot_row[j];
  }
  reduced_[col] = 0.0;

  state_[col] = VarState::Basic;
  basis_[row] = col;
}

void SimplexSolver::drive_out_artificials() {
  for (std::size_t i = 0; i < rows_; ++i) {
    if (basis_[i] < first_artificial_) continue;
    const double* row = &tableau_[i * cols_];
    std::size_t best = cols_;
    double best_abs = 1e-9;
    for (std::size_t j = 0; j < first_artificial_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      if (std::abs(row[j]) > best_abs) {
        best_abs = std::abs(row[j]);
        best = j;
      }
    }
    const std::size_t artificial = basis_[i];
    if (best == cols_) {
      // Redundant row: the artificial stays basic, pinned at zero.
      hi_[artificial] = 0.0;
      continue;
    }
    const double entering_value = value_[best];
    state_[artificial] = VarState::Dropped;
    value_[artificial] = 0.0;
    pivot(i, best);
    beta_[i] = entering_value;
  }
  for (std::size_t j = first_artificial_; j < cols_; ++j) {
    lo_[j] = 0.0;
    hi_[j] = 0.0;
    if (state_[j] != VarState::Basic) state_[j] = VarState::Dropped;
  }
}

// Recomputes basic values from the original rows to shed accumulated
// round-off from the incremental tableau updates.
void SimplexSolver::polish(const LinearProgram& lp) {
  if (rows_ == 0) return;
  const std::size_t n = structural_;
  Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(rows_, rows_);
  Eigen::VectorXd rhs(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto& row = lp.rows[i];
    double r = row.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      if (state_[j] != VarState::Basic && row.coeffs[j] != 0.0) r -= row.coeffs[j] * value_[j];
    }
    for (std::size_t j = n; j < cols_; ++j) {
      if (state_[j] != VarState::Basic && owner_row_[j] == i) r -= column_sign_[j] * value_[j];
    }
    rhs(static_cast<Eigen::Index>(i)) = r;
  }
  for (std::size_t c = 0; c < rows_; ++c) {
    const std::size_t var = basis_[c];
    const auto col = static_cast<Eigen::Index>(c);
    if (var < n) {
      for (std::size_t i = 0; i < rows_; ++i) {
        basis_matrix(static_cast<Eigen::Index>(i), col) = lp.rows[i].coeffs[var];
      }
    } else {
      basis_matrix(static_cast<Eigen::Index>(owner_row_[var]), col) = column_sign_[var];
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
  const Eigen::VectorXd solved = lu.solve(rhs);
  if (!solved.allFinite()) throw NumericalFailure("final basis is singular");
  for (std::size_t i = 0; i < rows_; ++i) {
    const double polished = solved(static_cast<Eigen::Index>(i));
    if (std::abs(polished - beta_[i]) > 1e-6 * std::max(1.0, std::abs(beta_[i]))) {
      throw NumericalFailure("tableau drifted from the refactored basis solution");
    }
    const std::size_t var = basis_[i];
    beta_[i] = std::clamp(polished, lo_[var], hi_[var]);
  }
}

}  // namespace battsched::lp
