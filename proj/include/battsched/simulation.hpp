#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "battsched/milp.hpp"
#include "battsched/model.hpp"
#include "battsched/mpc.hpp"
#include "battsched/rng.hpp"
#include "battsched/scm.hpp"
#include "battsched/stochastic.hpp"

namespace battsched {

/// A dispatch policy driven interval by interval by run_simulation.
class Controller {
 public:
  virtual ~Controller() = default;

  virtual std::string name() const = 0;

  /// True when decisions do not depend on the seed.
  virtual bool deterministic() const { return true; }

  /// Called once per run before the first interval. Timed as setup.
  virtual void reset(const ScenarioSeries& /*scenario*/, const BatteryParams& /*params*/,
                     std::uint64_t /*seed*/) {}

  virtual DispatchAction decide(std::size_t t, const ScenarioSeries& scenario,
                                const BatteryState& state, const BatteryParams& params) = 0;
};

class IdleController final : public Controller {
 public:
  std::string name() const override { return "idle"; }
  DispatchAction decide(std::size_t t, const ScenarioSeries& scenario, const BatteryState& state,
                        const BatteryParams& params) override;
};

class ScmController final : public Controller {
 public:
  explicit ScmController(ScmConfig cfg = {});
  std::string name() const override { return "scm"; }
  DispatchAction decide(std::size_t t, const ScenarioSeries& scenario, const BatteryState& state,
                        const BatteryParams& params) override;

 private:
  ScmConfig cfg_;
};

class MpcController final : public Controller {
 public:
  explicit MpcController(MpcConfig cfg = {});
  std::string name() const override { return "mpc"; }
  DispatchAction decide(std::size_t t, const ScenarioSeries& scenario, const BatteryState& state,
                        const BatteryParams& params) override;

 private:
  MpcConfig cfg_;
  MilpSolver solver_;
};

class StochasticController final : public Controller {
 public:
  explicit StochasticController(SrrConfig cfg = {});
  std::string name() const override { return "stochastic"; }
  bool deterministic() const override { return false; }
  void reset(const ScenarioSeries& scenario, const BatteryParams& params,
             std::uint64_t seed) override;
  DispatchAction decide(std::size_t t, const ScenarioSeries& scenario, const BatteryState& state,
                        const BatteryParams& params) override;

 private:
  SrrConfig cfg_;
  NormalizedPrices norm_;
  Rng rng_;
};

/// Aggregator requests that pre-empt the local controller for one interval.
struct ExternalSignalConfig {
  double probability = 0.0;      // per-interval chance of a request
  double direction_split = 0.5;  // share of requests that ask for charging

  void validate() const;
};

struct TrajectoryRow {
  std::size_t interval = 0;
  DispatchAction action;
  double energy_kwh = 0.0;  // after the interval
  double cost = 0.0;
  bool overridden = false;
  double decision_seconds = 0.0;
};

struct SimulationReport {
  std::string controller;
  std::vector<TrajectoryRow> trajectory;
  double total_cost = 0.0;
  // Wall-clock time spent in decide() only; equals the sum of
  // trajectory[i].decision_seconds.
  double controller_runtime_seconds = 0.0;
  double setup_seconds = 0.0;
  std::size_t intervals_overridden = 0;
};

/// Stream indices passed to derive_seed for the two random consumers.
inline constexpr std::uint64_t kControllerStream = 1;
inline constexpr std::uint64_t kSignalStream = 2;

/// Steps the battery through the scenario. Each interval either obeys an
/// external request (full feasible power in the requested direction) or asks
/// the controller. BoundsViolation from a controller is propagated.
SimulationReport run_simulation(const ScenarioSeries& scenario, Controller& controller,
                                const BatteryParams& params, const ExternalSignalConfig& signals,
                                std::uint64_t seed);

struct MethodSpec {
  std::string label;
  std::function<std::unique_ptr<Controller>()> make;
};

struct MethodSummary {
  std::string label;
  std::vector<double> costs;  // one per seed
  double mean_cost = 0.0;
  double stderr_cost = 0.0;
  double mean_runtime_seconds = 0.0;
  std::size_t runs = 0;  // simulations actually executed
  std::vector<SimulationReport> reports;  // per seed when requested
};

struct Comparison {
  std::vector<std::uint64_t> seeds;
  std::vector<MethodSummary> methods;

  const MethodSummary& method(const std::string& label) const;
};

/// 100 * (cost_a - cost_b) / cost_b
double percent_difference(double cost_a, double cost_b);

/// Runs every method once per seed. Seed-independent controllers are run a
/// single time when no external signals are active and their result is
/// reused for every seed.
Comparison run_comparison(const ScenarioSeries& scenario, const std::vector<MethodSpec>& methods,
                          const BatteryParams& params, const ExternalSignalConfig& signals,
                          const std::vector<std::uint64_t>& seeds, bool keep_reports = false);

}  // namespace battsched
