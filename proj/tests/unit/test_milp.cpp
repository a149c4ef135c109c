#include <doctest.h>

#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "battsched/errors.hpp"
#include "battsched/milp.hpp"

using namespace battsched;

namespace {

MilpProblem two_interval_arbitrage() {
  MilpProblem p;
  p.initial_energy_kwh = 1.35;
  p.load_kw = {0, 0};
  p.pv_kw = {0, 0};
  p.price_buy = {0.1, 1.0};
  p.price_sell = {0.05, 0.9};
  return p;
}

void check_feasible(const MilpProblem& p, const MilpSolution& s) {
  const BatteryParams& b = p.params;
  double e = p.initial_energy_kwh;
  for (std::size_t t = 0; t < p.horizon(); ++t) {
    REQUIRE(s.charge_kw[t] >= -1e-9);
    REQUIRE(s.discharge_kw[t] >= -1e-9);
    REQUIRE(s.charge_kw[t] <= b.charge_rate_kw + 1e-9);
    REQUIRE(s.discharge_kw[t] <= b.discharge_rate_kw + 1e-9);
    REQUIRE(s.charge_kw[t] * s.discharge_kw[t] == 0.0);
    REQUIRE(s.grid_buy_kw[t] >= 0.0);
    REQUIRE(s.grid_sell_kw[t] >= 0.0);
    const double balance = s.grid_buy_kw[t] - s.grid_sell_kw[t] + p.pv_kw[t] + s.discharge_kw[t] -
                           s.charge_kw[t] - p.load_kw[t];
    REQUIRE(std::abs(balance) <= 1e-9);
    e = e - p.dt_hours * (s.discharge_kw[t] / b.eff_discharge - b.eff_charge * s.charge_kw[t]);
    REQUIRE(s.energy_kwh[t] == doctest::Approx(e).epsilon(1e-12));
    REQUIRE(s.energy_kwh[t] >= b.e_min_kwh() - 1e-9);
    REQUIRE(s.energy_kwh[t] <= b.e_max_kwh() + 1e-9);
  }
  REQUIRE(std::abs(recompute_objective(p, s) - s.objective) <= 1e-9);
}

}  // namespace

TEST_SUITE("milp") {

TEST_CASE("two-interval arbitrage") {
  const auto p = two_interval_arbitrage();
  const auto s = solve_milp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-5.411).epsilon(1e-9));
  CHECK(s.charge_kw[0] == doctest::Approx(7.0));
  CHECK(s.discharge_kw[1] == doctest::Approx(6.79));
  check_feasible(p, s);
}

TEST_CASE("dp oracle on the arbitrage instance") {
  const auto d = solve_dp_oracle(two_interval_arbitrage(), 0.01);
  REQUIRE(d.status == SolveStatus::Optimal);
  CHECK(std::abs(d.objective - (-5.411)) <= 0.02);
}

TEST_CASE("zero prices give zero cost") {
  std::mt19937_64 gen(4);
  auto p = battsched::testing::random_problem(gen, 6);
  std::fill(p.price_buy.begin(), p.price_buy.end(), 0.0);
  std::fill(p.price_sell.begin(), p.price_sell.end(), 0.0);
  const auto s = solve_milp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == 0.0);
  check_feasible(p, s);
  CHECK(solve_dp_oracle(p, 0.05).objective == 0.0);
}

TEST_CASE("single interval discharge") {
  MilpProblem p;
  p.initial_energy_kwh = 4.05;
  p.load_kw = {5};
  p.pv_kw = {0};
  p.price_buy = {0.5};
  p.price_sell = {0.1};
  const auto s = solve_milp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.discharge_kw[0] == doctest::Approx(2.7));
  CHECK(s.grid_buy_kw[0] == doctest::Approx(2.3));
  CHECK(s.objective == doctest::Approx(1.15));
  CHECK(battsched::testing::single_interval_optimum(p) == doctest::Approx(1.15));
}

TEST_CASE("single interval matches closed-form enumeration") {
  std::mt19937_64 gen(21);
  for (int i = 0; i < 300; ++i) {
    const auto p = battsched::testing::random_problem(gen, 1);
    const double exact = battsched::testing::single_interval_optimum(p);
    const auto s = solve_milp(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    REQUIRE(std::abs(s.objective - exact) <= 1e-9);
    check_feasible(p, s);
    const auto d = solve_dp_oracle(p, 0.01);
    REQUIRE(d.objective >= exact - 1e-9);
  }
}

TEST_CASE("random horizons agree with the dynamic program") {
  std::mt19937_64 gen(1234);
  std::uniform_int_distribution<std::size_t> horizon(2, 8);
  MilpSolver solver;
  for (int i = 0; i < 200; ++i) {
    const auto p = battsched::testing::random_problem(gen, horizon(gen));
    const auto s = solver.solve(p);
    const auto d = solve_dp_oracle(p, 0.01);
    REQUIRE(s.status == SolveStatus::Optimal);
    REQUIRE(d.status == SolveStatus::Optimal);
    CHECK(std::abs(s.objective - d.objective) <= 0.05);
    CHECK(s.objective <= d.objective + 1e-9);
    check_feasible(p, s);
    CHECK(s.relaxation_objective <= s.objective + 1e-9);
    if (s.fast_path) CHECK(s.relaxation_objective == doctest::Approx(s.objective).epsilon(1e-12));
  }
}

TEST_CASE("branching is exercised when the relaxation overlaps") {
  // Negative sell prices reward burning energy through simultaneous
  // charge/discharge in the relaxation.
  std::mt19937_64 gen(77);
  MilpSolver solver;
  bool branched = false;
  for (int i = 0; i < 100 && !branched; ++i) {
    auto p = battsched::testing::random_problem(gen, 4);
    for (auto& s : p.price_sell) s = -0.5;
    for (auto& pv : p.pv_kw) pv = 15.0;
    const auto s = solver.solve(p);
    const auto d = solve_dp_oracle(p, 0.01);
    REQUIRE(s.status == SolveStatus::Optimal);
    check_feasible(p, s);
    CHECK(s.objective <= d.objective + 1e-9);
    CHECK(std::abs(s.objective - d.objective) <= 0.05);
    branched = !s.fast_path;
  }
  CHECK(branched);
}

TEST_CASE("re-solving is bit-identical") {
  std::mt19937_64 gen(8);
  const auto p = battsched::testing::random_problem(gen, 24);
  MilpSolver solver;
  const auto a = solver.solve(p);
  const auto b = solver.solve(p);
  const auto c = solve_milp(p);
  CHECK(a.objective == b.objective);
  CHECK(a.objective == c.objective);
  CHECK(a.charge_kw == c.charge_kw);
  CHECK(a.discharge_kw == c.discharge_kw);
}

TEST_CASE("invalid problems are rejected") {
  MilpProblem p = two_interval_arbitrage();
  p.initial_energy_kwh = 20.0;
  CHECK_THROWS_AS(solve_milp(p), ValidationError);
  p = two_interval_arbitrage();
  p.price_sell.pop_back();
  CHECK_THROWS_AS(solve_milp(p), ValidationError);
  p = MilpProblem{};
  CHECK_THROWS_AS(solve_milp(p), ValidationError);
}

TEST_CASE("LP text dump names every variable and declares binaries") {
  std::ostringstream os;
  write_lp_format(two_interval_arbitrage(), os);
  const std::string text = os.str();
  for (const char* token : {"Minimize", "Subject To", "Bounds", "Binaries", "B_0", "S_1", "PCH_0",
                            "PDC_1", "X_0", "Y_1", "E_1", "End"}) {
    CHECK_MESSAGE(text.find(token) != std::string::npos, token);
  }
}

}  // TEST_SUITE
