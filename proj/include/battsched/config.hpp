#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "battsched/model.hpp"
#include "battsched/mpc.hpp"
#include "battsched/scm.hpp"
#include "battsched/simulation.hpp"
#include "battsched/stochastic.hpp"
#include "battsched/synthetic.hpp"

namespace battsched {

/// Everything needed to reproduce an experiment. Loaded from an INI file whose
/// sections and keys mirror the field names below:
///
///   [scenario]   csv, days, dt_hours, seed, tariff_adder, mean_load_kw,
///                pv_peak_kw, spot_level, spot_swing, spot_drift
///   [battery]    nominal_capacity_kwh, charge_rate_kw, discharge_rate_kw,
///                eff_charge, eff_discharge, soc_max, soc_min, soc_init
///   [scm]        deadband_kw
///   [mpc]        horizon
///   [stochastic] k_charge, k_discharge, epsilon
///   [signals]    probability, direction_split
///   [run]        controllers, seeds, seed_count, output_dir
///   [sweep]      probabilities, deadbands, horizons, k_values
///
/// List values are comma separated. Unknown sections or keys are rejected.
struct RunConfig {
  std::optional<std::filesystem::path> scenario_csv;
  SyntheticSpec synthetic;
  double tariff_adder = 0.2;

  BatteryParams battery;
  ScmConfig scm;
  MpcConfig mpc;
  SrrConfig stochastic;
  ExternalSignalConfig signals;

  std::vector<std::string> controllers{"scm", "mpc", "stochastic"};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::filesystem::path output_dir = "out";

  std::vector<double> probabilities{0.0, 0.1, 0.2, 0.3};
  std::vector<double> deadbands{0.1, 0.5, 1.0};
  std::vector<std::size_t> horizons{8, 16, 24};
  std::vector<double> k_values{0.1, 0.3, 1.0};

  /// Throws ConfigError/ValidationError on any invariant violation, including
  /// a scenario CSV path that does not exist.
  void validate() const;
};

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Scenario named by the config: the CSV when given, otherwise synthetic.
ScenarioSeries load_scenario(const RunConfig& config);

/// Builds a controller by name: idle, scm, mpc, stochastic.
MethodSpec make_method(const std::string& name, const RunConfig& config);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace battsched
