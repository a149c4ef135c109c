#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "battsched/model.hpp"

namespace battsched {

/// Synthetic month-like scenario: two-peak building load, a midday PV bell
/// with day-to-day cloudiness, and day-ahead style spot prices (cheap nights,
/// morning and evening peaks, a midday dip) with day-level drift and noise.
struct SyntheticSpec {
  std::size_t days = 30;
  double dt_hours = 1.0;
  std::uint64_t seed = 1;
  double tariff_adder = 0.2;  // buy = spot + adder
  double pv_peak_kw = 10.0;
  double mean_load_kw = 10.0;
  // Spot price model: mean level, scale of the intraday profile, and the
  // standard deviation of the day-to-day level drift (all EUR/kWh).
  double spot_level = 0.2;
  double spot_swing = 2.0;
  double spot_drift = 0.02;
  // Daylight window in local hours; PV is exactly zero outside it.
  double sunrise_hour = 6.0;
  double sunset_hour = 20.0;
  std::string start = "2022-05-01T00:00:00";

  void validate() const;
};

ScenarioSeries generate_synthetic(const SyntheticSpec& spec);

}  // namespace battsched
