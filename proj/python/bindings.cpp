#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "battsched/errors.hpp"
#include "battsched/milp.hpp"
#include "battsched/model.hpp"
#include "battsched/scenario_io.hpp"
#include "battsched/scm.hpp"
#include "battsched/simulation.hpp"
#include "battsched/stochastic.hpp"
#include "battsched/synthetic.hpp"

namespace py = pybind11;
using namespace battsched;

namespace {

MilpProblem make_problem(std::vector<double> load, std::vector<double> pv, std::vector<double> buy,
                         std::vector<double> sell, double initial_energy_kwh,
                         const BatteryParams& params, double dt_hours) {
  MilpProblem p;
  p.load_kw = std::move(load);
  p.pv_kw = std::move(pv);
  p.price_buy = std::move(buy);
  p.price_sell = std::move(sell);
  p.initial_energy_kwh = initial_energy_kwh;
  p.params = params;
  p.dt_hours = dt_hours;
  return p;
}

std::unique_ptr<Controller> make_controller(const std::string& name, double deadband_kw,
                                            std::size_t horizon, const SrrConfig& srr) {
  if (name == "idle") return std::make_unique<IdleController>();
  if (name == "scm") return std::make_unique<ScmController>(ScmConfig{deadband_kw});
  if (name == "mpc") return std::make_unique<MpcController>(MpcConfig{horizon});
  if (name == "stochastic") return std::make_unique<StochasticController>(srr);
  throw py::value_error("unknown controller '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Battery dispatch simulation core";

  py::register_exception<BoundsViolation>(m, "BoundsViolation");
  py::register_exception<NumericalFailure>(m, "NumericalFailure");

  py::class_<BatteryParams>(m, "BatteryParams")
      .def(py::init<>())
      .def_readwrite("nominal_capacity_kwh", &BatteryParams::nominal_capacity_kwh)
      .def_readwrite("charge_rate_kw", &BatteryParams::charge_rate_kw)
      .def_readwrite("discharge_rate_kw", &BatteryParams::discharge_rate_kw)
      .def_readwrite("eff_charge", &BatteryParams::eff_charge)
      .def_readwrite("eff_discharge", &BatteryParams::eff_discharge)
      .def_readwrite("soc_max", &BatteryParams::soc_max)
      .def_readwrite("soc_min", &BatteryParams::soc_min)
      .def_readwrite("soc_init", &BatteryParams::soc_init)
      .def_property_readonly("e_max_kwh", &BatteryParams::e_max_kwh)
      .def_property_readonly("e_min_kwh", &BatteryParams::e_min_kwh)
      .def_property_readonly("e_init_kwh", &BatteryParams::e_init_kwh)
      .def("validate", &BatteryParams::validate);

  py::class_<DispatchAction>(m, "DispatchAction")
      .def(py::init<>())
      .def(py::init([](double ch, double dc, double buy, double sell) {
             return DispatchAction{ch, dc, buy, sell};
           }),
           py::arg("charge_kw"), py::arg("discharge_kw"), py::arg("grid_buy_kw") = 0.0,
           py::arg("grid_sell_kw") = 0.0)
      .def_readwrite("charge_kw", &DispatchAction::charge_kw)
      .def_readwrite("discharge_kw", &DispatchAction::discharge_kw)
      .def_readwrite("grid_buy_kw", &DispatchAction::grid_buy_kw)
      .def_readwrite("grid_sell_kw", &DispatchAction::grid_sell_kw)
      .def("__repr__", [](const DispatchAction& a) {
        return "DispatchAction(charge_kw=" + std::to_string(a.charge_kw) +
               ", discharge_kw=" + std::to_string(a.discharge_kw) +
               ", grid_buy_kw=" + std::to_string(a.grid_buy_kw) +
               ", grid_sell_kw=" + std::to_string(a.grid_sell_kw) + ")";
      });

  py::class_<ScenarioSeries>(m, "ScenarioSeries")
      .def(py::init<>())
      .def_readwrite("dt_hours", &ScenarioSeries::dt_hours)
      .def_readwrite("load_kw", &ScenarioSeries::load_kw)
      .def_readwrite("pv_kw", &ScenarioSeries::pv_kw)
      .def_readwrite("price_buy", &ScenarioSeries::price_buy)
      .def_readwrite("price_sell", &ScenarioSeries::price_sell)
      .def_readwrite("timestamps", &ScenarioSeries::timestamps)
      .def("validate", &ScenarioSeries::validate)
      .def("__len__", &ScenarioSeries::size);

  py::class_<SrrConfig>(m, "SrrConfig")
      .def(py::init([](double kc, double kd, double eps) { return SrrConfig{kc, kd, eps}; }),
           py::arg("k_charge") = 0.3, py::arg("k_discharge") = 0.3, py::arg("epsilon") = 1e-6)
      .def_readwrite("k_charge", &SrrConfig::k_charge)
      .def_readwrite("k_discharge", &SrrConfig::k_discharge)
      .def_readwrite("epsilon", &SrrConfig::epsilon);

  py::class_<ExternalSignalConfig>(m, "ExternalSignalConfig")
      .def(py::init([](double p, double split) { return ExternalSignalConfig{p, split}; }),
           py::arg("probability") = 0.0, py::arg("direction_split") = 0.5)
      .def_readwrite("probability", &ExternalSignalConfig::probability)
      .def_readwrite("direction_split", &ExternalSignalConfig::direction_split);

  py::class_<MilpSolution>(m, "MilpSolution")
      .def_property_readonly("optimal",
                             [](const MilpSolution& s) { return s.status == SolveStatus::Optimal; })
      .def_readonly("objective", &MilpSolution::objective)
      .def_readonly("charge_kw", &MilpSolution::charge_kw)
      .def_readonly("discharge_kw", &MilpSolution::discharge_kw)
      .def_readonly("grid_buy_kw", &MilpSolution::grid_buy_kw)
      .def_readonly("grid_sell_kw", &MilpSolution::grid_sell_kw)
      .def_readonly("energy_kwh", &MilpSolution::energy_kwh)
      .def_readonly("relaxation_objective", &MilpSolution::relaxation_objective)
      .def_readonly("nodes_explored", &MilpSolution::nodes_explored)
      .def_readonly("fast_path", &MilpSolution::fast_path);

  py::class_<SimulationReport>(m, "SimulationReport")
      .def_readonly("controller", &SimulationReport::controller)
      .def_readonly("total_cost", &SimulationReport::total_cost)
      .def_readonly("controller_runtime_seconds", &SimulationReport::controller_runtime_seconds)
      .def_readonly("intervals_overridden", &SimulationReport::intervals_overridden)
      .def_property_readonly("energy_kwh",
                             [](const SimulationReport& r) {
                               std::vector<double> v;
                               for (const auto& row : r.trajectory) v.push_back(row.energy_kwh);
                               return v;
                             })
      .def_property_readonly("actions",
                             [](const SimulationReport& r) {
                               std::vector<DispatchAction> v;
                               for (const auto& row : r.trajectory) v.push_back(row.action);
                               return v;
                             })
      .def_property_readonly("interval_costs", [](const SimulationReport& r) {
        std::vector<double> v;
        for (const auto& row : r.trajectory) v.push_back(row.cost);
        return v;
      });

  m.def(
      "step_battery",
      [](double energy_kwh, const DispatchAction& a, const BatteryParams& p, double dt) {
        return step_battery(BatteryState{energy_kwh}, a, p, dt).energy_kwh;
      },
      py::arg("energy_kwh"), py::arg("action"), py::arg("params"), py::arg("dt_hours") = 1.0,
      "Stored energy after one interval; raises BoundsViolation when leaving the SoC window.");
  m.def(
      "split_grid",
      [](double load, double pv, double ch, double dc) {
        const GridFlow g = split_grid(load, pv, ch, dc);
        return py::make_tuple(g.buy_kw, g.sell_kw);
      },
      py::arg("load_kw"), py::arg("pv_kw"), py::arg("charge_kw"), py::arg("discharge_kw"));
  m.def("interval_cost", &interval_cost, py::arg("action"), py::arg("price_buy"),
        py::arg("price_sell"), py::arg("dt_hours") = 1.0);
  m.def(
      "scm_decide",
      [](double load, double pv, double energy, const BatteryParams& p, double deadband,
         double dt) {
        return scm_decide(load, pv, BatteryState{energy}, p, ScmConfig{deadband}, dt);
      },
      py::arg("load_kw"), py::arg("pv_kw"), py::arg("energy_kwh"), py::arg("params"),
      py::arg("deadband_kw") = 0.1, py::arg("dt_hours") = 1.0);
  m.def(
      "normalize_prices", [](const std::vector<double>& v) { return normalize_prices(v); },
      py::arg("prices"));
  m.def(
      "modify_buy_prices",
      [](const std::vector<double>& buy, const std::vector<double>& load,
         const std::vector<double>& pv) { return modify_buy_prices(buy, load, pv); },
      py::arg("price_buy"), py::arg("load_kw"), py::arg("pv_kw"));
  m.def("srr_charge", &srr_charge, py::arg("rho"), py::arg("cfg") = SrrConfig{});
  m.def("srr_discharge", &srr_discharge, py::arg("rho"), py::arg("cfg") = SrrConfig{});
  m.def(
      "solve_milp",
      [](std::vector<double> load, std::vector<double> pv, std::vector<double> buy,
         std::vector<double> sell, double e0, const BatteryParams& p, double dt) {
        return solve_milp(make_problem(std::move(load), std::move(pv), std::move(buy),
                                       std::move(sell), e0, p, dt));
      },
      py::arg("load_kw"), py::arg("pv_kw"), py::arg("price_buy"), py::arg("price_sell"),
      py::arg("initial_energy_kwh"), py::arg("params") = BatteryParams{},
      py::arg("dt_hours") = 1.0);
  m.def(
      "solve_dp_oracle",
      [](std::vector<double> load, std::vector<double> pv, std::vector<double> buy,
         std::vector<double> sell, double e0, const BatteryParams& p, double dt, double grid) {
        return solve_dp_oracle(make_problem(std::move(load), std::move(pv), std::move(buy),
                                            std::move(sell), e0, p, dt),
                               grid);
      },
      py::arg("load_kw"), py::arg("pv_kw"), py::arg("price_buy"), py::arg("price_sell"),
      py::arg("initial_energy_kwh"), py::arg("params") = BatteryParams{},
      py::arg("dt_hours") = 1.0, py::arg("soc_grid_kwh") = 0.01);
  m.def(
      "run_simulation",
      [](const ScenarioSeries& s, const std::string& controller, const BatteryParams& p,
         const ExternalSignalConfig& signals, std::uint64_t seed, double deadband_kw,
         std::size_t horizon, const SrrConfig& srr) {
        auto c = make_controller(controller, deadband_kw, horizon, srr);
        py::gil_scoped_release release;
        return run_simulation(s, *c, p, signals, seed);
      },
      py::arg("scenario"), py::arg("controller"), py::arg("params") = BatteryParams{},
      py::arg("signals") = ExternalSignalConfig{}, py::arg("seed") = 1,
      py::arg("deadband_kw") = 0.1, py::arg("horizon") = 24, py::arg("srr") = SrrConfig{});
  m.def(
      "generate_synthetic",
      [](std::size_t days, double dt, std::uint64_t seed, double tariff) {
        SyntheticSpec spec;
        spec.days = days;
        spec.dt_hours = dt;
        spec.seed = seed;
        spec.tariff_adder = tariff;
        return generate_synthetic(spec);
      },
      py::arg("days") = 30, py::arg("dt_hours") = 1.0, py::arg("seed") = 1,
      py::arg("tariff_adder") = 0.2);
  m.def(
      "load_scenario_csv",
      [](const std::filesystem::path& path, double tariff) {
        return load_scenario_csv(path, CsvLoadOptions{tariff, 1.0});
      },
      py::arg("path"), py::arg("tariff_adder") = 0.2);
}
