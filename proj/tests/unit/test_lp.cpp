#include <doctest.h>
#include <bit>

#include <Eigen/Dense>
#include <random>

#include "battsched/errors.hpp"
#include "battsched/lp.hpp"

using namespace battsched;
using namespace battsched::lp;

namespace {

// Brute-force optimum of a box-bounded LP: every vertex has some set of tight
// rows R and the same number of free columns F, with every other column at
// one of its bounds. Enumerates all such (R, F, bound pattern) triples.
struct VertexOracle {
  bool feasible = false;
  double value = kInf;
};

bool row_holds(const LinearProgram::Row& row, const Eigen::VectorXd& x, double tol) {
  double lhs = 0.0;
  for (std::size_t j = 0; j < row.coeffs.size(); ++j) lhs += row.coeffs[j] * x[Eigen::Index(j)];
  switch (row.sense) {
    case RowSense::LessEqual: return lhs <= row.rhs + tol;
    case RowSense::GreaterEqual: return lhs >= row.rhs - tol;
    case RowSense::Equal: return std::abs(lhs - row.rhs) <= tol;
  }
  return false;
}

VertexOracle enumerate_vertices(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.num_rows();
  VertexOracle best;
  std::vector<std::size_t> tight, free_cols, fixed_cols;
  for (std::size_t rmask = 0; rmask < (std::size_t{1} << m); ++rmask) {
    tight.clear();
    bool covers_equalities = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (rmask >> i & 1) tight.push_back(i);
      else if (lp.rows[i].sense == RowSense::Equal) covers_equalities = false;
    }
    if (!covers_equalities) continue;
    const std::size_t k = tight.size();
    for (std::size_t fmask = 0; fmask < (std::size_t{1} << n); ++fmask) {
      if (static_cast<std::size_t>(std::popcount(fmask)) != k) continue;
      free_cols.clear();
      fixed_cols.clear();
      for (std::size_t j = 0; j < n; ++j) (fmask >> j & 1 ? free_cols : fixed_cols).push_back(j);
      const auto dim = static_cast<Eigen::Index>(k);
      Eigen::MatrixXd a(dim, dim);
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) a(Eigen::Index(r), Eigen::Index(c)) = lp.rows[tight[r]].coeffs[free_cols[c]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (k > 0 && !lu.isInvertible()) continue;
      const std::size_t patterns = std::size_t{1} << fixed_cols.size();
      for (std::size_t bmask = 0; bmask < patterns; ++bmask) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(n));
        for (std::size_t f = 0; f < fixed_cols.size(); ++f) {
          const std::size_t j = fixed_cols[f];
          x[Eigen::Index(j)] = (bmask >> f & 1) ? lp.upper[j] : lp.lower[j];
        }
        if (k > 0) {
          Eigen::VectorXd b(dim);
          for (std::size_t r = 0; r < k; ++r) {
            double rhs = lp.rows[tight[r]].rhs;
            for (std::size_t j : fixed_cols) rhs -= lp.rows[tight[r]].coeffs[j] * x[Eigen::Index(j)];
            b[Eigen::Index(r)] = rhs;
          }
          const Eigen::VectorXd sol = lu.solve(b);
          bool in_box = true;
          for (std::size_t c = 0; c < k; ++c) {
            const double v = sol[Eigen::Index(c)];
            const std::size_t j = free_cols[c];
            if (v < lp.lower[j] - 1e-9 || v > lp.upper[j] + 1e-9) in_box = false;
            x[Eigen::Index(j)] = v;
          }
          if (!in_box) continue;
        }
        bool ok = true;
        for (const auto& row : lp.rows) ok = ok && row_holds(row, x, 1e-9);
        if (!ok) continue;
        double value = 0.0;
        for (std::size_t j = 0; j < n; ++j) value += lp.cost[j] * x[Eigen::Index(j)];
        best.feasible = true;
        best.value = std::min(best.value, value);
      }
    }
  }
  return best;
}

LinearProgram random_lp(std::mt19937_64& gen, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LinearProgram lp(n);
  for (std::size_t j = 0; j < n; ++j) {
    lp.cost[j] = u(gen);
    lp.lower[j] = j % 3 == 0 ? -2.0 - u(gen) : 0.0;
    lp.upper[j] = 1.0 + 2.0 * std::abs(u(gen));
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> coeffs(n);
    for (auto& c : coeffs) c = std::abs(u(gen)) < 0.3 ? 0.0 : u(gen);
    const auto sense = static_cast<RowSense>(i % 3);
    lp.add_row(std::move(coeffs), sense, 2.0 * u(gen));
  }
  return lp;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("single bounded variable") {
  LinearProgram lp(1);
  lp.cost = {-1.0};
  lp.add_row({{0, 1.0}}, RowSense::LessEqual, 1.0);
  const auto r = solve_lp(lp);
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(-1.0));
}

TEST_CASE("degenerate symmetric optimum has a unique value") {
  LinearProgram lp(2);
  lp.cost = {1.0, 1.0};
  lp.add_row({{0, 1.0}, {1, 1.0}}, RowSense::GreaterEqual, 2.0);
  const auto r = solve_lp(lp);
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.x[0] + r.x[1] == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded programs are classified") {
  LinearProgram infeasible(2);
  infeasible.add_row({{0, 1.0}, {1, 1.0}}, RowSense::LessEqual, 1.0);
  infeasible.add_row({{0, 1.0}, {1, 1.0}}, RowSense::GreaterEqual, 2.0);
  CHECK(solve_lp(infeasible).status == Status::Infeasible);

  LinearProgram unbounded(2);
  unbounded.cost = {-1.0, 0.0};
  unbounded.add_row({{0, 1.0}, {1, -1.0}}, RowSense::LessEqual, 1.0);
  CHECK(solve_lp(unbounded).status == Status::Unbounded);
}

TEST_CASE("free variables and equality rows") {
  LinearProgram lp(2);
  lp.lower = {-kInf, -kInf};
  lp.cost = {1.0, 2.0};
  lp.add_row({{0, 1.0}, {1, 1.0}}, RowSense::Equal, 3.0);
  lp.add_row({{0, 1.0}}, RowSense::LessEqual, 10.0);
  lp.add_row({{1, 1.0}}, RowSense::GreaterEqual, -1.0);
  const auto r = solve_lp(lp);
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.x[0] == doctest::Approx(4.0));
  CHECK(r.x[1] == doctest::Approx(-1.0));
  CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("random 10-variable programs match vertex enumeration") {
  std::mt19937_64 gen(2024);
  SimplexSolver solver;
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const LinearProgram lp = random_lp(gen, 10, 4);
    const VertexOracle oracle = enumerate_vertices(lp);
    const Result r = solver.solve(lp);
    if (!oracle.feasible) {
      CHECK(r.status == Status::Infeasible);
      ++infeasible;
      continue;
    }
    ++feasible;
    REQUIRE(r.status == Status::Optimal);
    CHECK(std::abs(r.objective - oracle.value) <= 1e-7);
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
      CHECK(r.x[j] >= lp.lower[j] - 1e-9);
      CHECK(r.x[j] <= lp.upper[j] + 1e-9);
    }
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(r.x.data(), Eigen::Index(r.x.size()));
    for (const auto& row : lp.rows) CHECK(row_holds(row, x, 1e-9));
  }
  CHECK(feasible > 20);
  MESSAGE("feasible " << feasible << ", infeasible " << infeasible);
}

TEST_CASE("solver instance is reusable and deterministic") {
  std::mt19937_64 gen(99);
  const LinearProgram lp = random_lp(gen, 10, 4);
  SimplexSolver solver;
  const auto a = solver.solve(lp);
  const auto b = solver.solve(lp);
  CHECK(a.status == b.status);
  CHECK(a.objective == b.objective);
  CHECK(a.x == b.x);
}

}  // TEST_SUITE
