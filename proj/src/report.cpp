#include "battsched/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "battsched/scenario_io.hpp"

namespace battsched {

void Table::write_csv(std::ostream& out) const {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
}

void Table::write_text(std::ostream& out) const {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out << "  ";
      const std::size_t pad = width[c] - std::min(width[c], cells[c].size());
      // Method names left-aligned, numbers right-aligned.
      if (c == 0) {
        out << cells[c] << std::string(pad, ' ');
      } else {
        out << std::string(pad, ' ') << cells[c];
      }
    }
    out << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
  for (const auto& row : rows) line(row);
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_trajectory_csv(const SimulationReport& report, const BatteryParams& params,
                          std::ostream& out) {
  out << "interval,soc,charge,discharge,buy,sell,cost\n";
  for (const TrajectoryRow& row : report.trajectory) {
    out << row.interval << ',' << format_double(row.energy_kwh / params.nominal_capacity_kwh)
        << ',' << format_double(row.action.charge_kw) << ','
        << format_double(row.action.discharge_kw) << ',' << format_double(row.action.grid_buy_kw)
        << ',' << format_double(row.action.grid_sell_kw) << ',' << format_double(row.cost)
        << '\n';
  }
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

void emit_report(const Comparison& comparison, const BatteryParams& params,
                 const std::filesystem::path& dir) {
  if (comparison.methods.empty()) throw std::invalid_argument("no rows to report");

  Table text{{"method", "cost", "cost_stderr", "runs", "runtime_s"}, {}};
  Table costs{{"method", "cost", "cost_stderr", "runs"}, {}};
  Table timing{{"method", "runtime_s"}, {}};
  for (const MethodSummary& m : comparison.methods) {
    text.rows.push_back({m.label, fixed(m.mean_cost, 4), fixed(m.stderr_cost, 4),
                         std::to_string(m.costs.size()), fixed(m.mean_runtime_seconds, 6)});
    costs.rows.push_back({m.label, format_double(m.mean_cost), format_double(m.stderr_cost),
                          std::to_string(m.costs.size())});
    timing.rows.push_back({m.label, format_double(m.mean_runtime_seconds)});
  }

  std::ostringstream os;
  text.write_text(os);
  write_file(dir / "report.txt", os.str());
  os.str("");
  costs.write_csv(os);
  write_file(dir / "report.csv", os.str());
  os.str("");
  timing.write_csv(os);
  write_file(dir / "timing.csv", os.str());

  for (const MethodSummary& m : comparison.methods) {
    for (std::size_t i = 0; i < m.reports.size() && i < m.runs; ++i) {
      os.str("");
      write_trajectory_csv(m.reports[i], params, os);
      write_file(dir / "trajectories" /
                     (m.label + "_seed" + std::to_string(comparison.seeds[i]) + ".csv"),
                 os.str());
    }
  }
}

}  // namespace battsched
