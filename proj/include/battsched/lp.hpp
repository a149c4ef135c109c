#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

namespace battsched::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, GreaterEqual, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

std::string_view to_string(Status status);

/// minimize cost'x  s.t.  rows,  lower <= x <= upper.
/// Bounds may be infinite; rows are stored dense.
class LinearProgram {
 public:
  struct Row {
    std::vector<double> coeffs;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
  };

  LinearProgram() = default;
  explicit LinearProgram(std::size_t num_vars)
      : cost(num_vars, 0.0), lower(num_vars, 0.0), upper(num_vars, kInf) {}

  std::size_t num_vars() const { return cost.size(); }
  std::size_t num_rows() const { return rows.size(); }

  std::size_t add_row(std::initializer_list<std::pair<std::size_t, double>> terms, RowSense sense,
                      double rhs);
  std::size_t add_row(std::vector<double> coeffs, RowSense sense, double rhs);

  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;
};

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-11;
  std::size_t max_iterations = 100000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_limit = 50;
};

struct Result {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
};

/// Two-phase bounded-variable primal simplex over a dense tableau.
/// Holds its working memory between calls; one instance per thread.
class SimplexSolver {
 public:
  explicit SimplexSolver(Options options = {}) : options_(options) {}

  /// Throws NumericalFailure when the iteration limit is hit or the final
  /// basis cannot be refactored.
  Result solve(const LinearProgram& lp);

 private:
  enum class VarState : unsigned char { Basic, AtLower, AtUpper, FreeZero, Dropped };

  bool iterate(bool phase_one);
  void pivot(std::size_t row, std::size_t col);
  void compute_reduced_costs(const std::vector<double>& costs);
  void drive_out_artificials();
  void polish(const LinearProgram& lp);

  double& cell(std::size_t r, std::size_t c) { return tableau_[r * cols_ + c]; }

  Options options_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t structural_ = 0;
  std::size_t first_artificial_ = 0;
  std::vector<double> tableau_;
  std::vector<double> reduced_;
  std::vector<double> beta_;
  std::vector<std::size_t> basis_;
  std::vector<double> value_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> column_sign_;  // slack/artificial coefficient in its row
  std::vector<std::size_t> owner_row_;
  std::vector<VarState> state_;
  std::vector<std::size_t> nonzero_;
  std::size_t iterations_ = 0;
};

inline Result solve_lp(const LinearProgram& lp, Options options = {}) {
  return SimplexSolver(options).solve(lp);
}

}  // namespace battsched::lp
