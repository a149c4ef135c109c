"""Battery dispatch simulation: SCM, receding-horizon MPC and a stochastic
price-responsive controller for PV/battery/load systems."""

from ._core import (  # noqa: F401
    BatteryParams,
    DispatchAction,
    ExternalSignalConfig,
    MilpSolution,
    ScenarioSeries,
    SimulationReport,
    SrrConfig,
    generate_synthetic,
    interval_cost,
    load_scenario_csv,
    modify_buy_prices,
    normalize_prices,
    run_simulation,
    scm_decide,
    solve_dp_oracle,
    solve_milp,
    split_grid,
    srr_charge,
    srr_discharge,
    step_battery,
)

__all__ = [name for name in dir() if not name.startswith("_")]
