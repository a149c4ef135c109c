#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "battsched/model.hpp"

namespace battsched {

// Input columns, in the order written by write_scenario_csv.
inline constexpr const char* kScenarioColumns[] = {"timestamp", "load_kw", "pv_kw", "price_spot"};

struct CsvLoadOptions {
  // Added to the spot price to obtain the buy price (currency/kWh).
  double tariff_adder = 0.2;
  // Used only when the file has a single row and spacing cannot be inferred.
  double default_dt_hours = 1.0;
};

/// Reads `timestamp,load_kw,pv_kw,price_spot`. Buy price is spot plus the
/// tariff adder, sell price is spot. Interval length comes from the
/// timestamp spacing, which must be uniform.
ScenarioSeries load_scenario_csv(const std::filesystem::path& path,
                                 const CsvLoadOptions& options = {});
ScenarioSeries parse_scenario_csv(std::istream& in, const CsvLoadOptions& options = {});

/// Inverse of load_scenario_csv: writes the sell price as price_spot with 17
/// significant digits, so reloading with the same tariff reproduces the series.
void write_scenario_csv(const ScenarioSeries& scenario, std::ostream& out);
void write_scenario_csv(const ScenarioSeries& scenario, const std::filesystem::path& path);

/// Shortest round-trip-safe rendering used by every CSV writer ("%.17g").
std::string format_double(double value);

/// Parses "YYYY-MM-DDTHH:MM[:SS][Z]" into seconds since the Unix epoch.
std::int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(std::int64_t epoch_seconds);

}  // namespace battsched
