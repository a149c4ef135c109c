#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "battsched/model.hpp"
#include "battsched/simulation.hpp"

namespace battsched {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const;
  /// Space-aligned columns with a rule under the header.
  void write_text(std::ostream& out) const;
};

void write_file(const std::filesystem::path& path, const std::string& contents);

/// interval,soc,charge,discharge,buy,sell,cost. buy/sell are grid powers in
/// kW, soc is stored energy over nominal capacity after the interval.
void write_trajectory_csv(const SimulationReport& report, const BatteryParams& params,
                          std::ostream& out);

/// Writes into `dir`:
///   report.txt   aligned table with cost and decision runtime
///   report.csv   method,cost,cost_stderr,runs   (deterministic)
///   timing.csv   method,runtime_s                (wall clock)
///   trajectories/<method>_seed<seed>.csv for every simulation executed
void emit_report(const Comparison& comparison, const BatteryParams& params,
                 const std::filesystem::path& dir);

}  // namespace battsched
