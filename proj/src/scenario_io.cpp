#include "battsched/scenario_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "battsched/errors.hpp"

namespace battsched {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(const std::string& field, std::size_t row, std::size_t column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    std::ostringstream os;
    os << "row " << row << ", column " << column << ": cannot parse number '" << field << "'";
    throw ParseError(os.str(), row, column);
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::int64_t parse_iso8601(const std::string& text) {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  int consumed = 0;
  const int fields =
      std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &year, &month, &day, &hour, &minute,
                  &second, &consumed);
  if (fields < 6) {
    second = 0;
    consumed = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d%n", &year, &month, &day, &hour, &minute,
                    &consumed) < 5) {
      throw ParseError("malformed ISO-8601 timestamp '" + text + "'");
    }
  }
  const std::string rest = text.substr(static_cast<std::size_t>(consumed));
  if (!(rest.empty() || rest == "Z")) {
    throw ParseError("unsupported ISO-8601 suffix in '" + text + "'");
  }
  using namespace std::chrono;
  const year_month_day date{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                            std::chrono::day{static_cast<unsigned>(day)}};
  if (!date.ok() || hour > 23 || minute > 59 || second > 60 || hour < 0 || minute < 0 ||
      second < 0) {
    throw ParseError("invalid calendar timestamp '" + text + "'");
  }
  const auto days_since_epoch = sys_days{date}.time_since_epoch().count();
  return static_cast<std::int64_t>(days_since_epoch) * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_iso8601(std::int64_t epoch_seconds) {
  using namespace std::chrono;
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const year_month_day date{sys_days{std::chrono::days{days}}};
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02uT%02d:%02d:%02d", int(date.year()),
                unsigned(date.month()), unsigned(date.day()), int(rem / 3600),
                int((rem % 3600) / 60), int(rem % 60));
  return buffer;
}

ScenarioSeries parse_scenario_csv(std::istream& in, const CsvLoadOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("no header row", line_no, 0);

  std::size_t column_of[4];
  for (std::size_t c = 0; c < 4; ++c) {
    std::size_t found = header.size();
    for (std::size_t h = 0; h < header.size(); ++h) {
      if (header[h] == kScenarioColumns[c]) found = h;
    }
    if (found == header.size()) {
      throw SchemaError(std::string("missing column '") + kScenarioColumns[c] + "'");
    }
    column_of[c] = found;
  }

  ScenarioSeries s;
  std::vector<std::int64_t> times;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << "row " << line_no << ": expected " << header.size() << " fields, found "
         << fields.size();
      throw ParseError(os.str(), line_no, 0);
    }
    const std::string& stamp = fields[column_of[0]];
    try {
      times.push_back(parse_iso8601(stamp));
    } catch (const ParseError& e) {
      std::ostringstream os;
      os << "row " << line_no << ", column " << column_of[0] + 1 << ": " << e.what();
      throw ParseError(os.str(), line_no, column_of[0] + 1);
    }
    const double load = parse_number(fields[column_of[1]], line_no, column_of[1] + 1);
    const double pv = parse_number(fields[column_of[2]], line_no, column_of[2] + 1);
    const double spot = parse_number(fields[column_of[3]], line_no, column_of[3] + 1);
    if (load < 0 || pv < 0) {
      std::ostringstream os;
      os << "row " << line_no << ": " << (load < 0 ? "load_kw" : "pv_kw") << " is negative";
      throw ValidationError(os.str());
    }
    s.timestamps.push_back(stamp);
    s.load_kw.push_back(load);
    s.pv_kw.push_back(pv);
    s.price_sell.push_back(spot);
    s.price_buy.push_back(spot + options.tariff_adder);
  }
  if (s.load_kw.empty()) throw ParseError("no data rows", line_no, 0);

  s.dt_hours = options.default_dt_hours;
  if (times.size() >= 2) {
    const std::int64_t step = times[1] - times[0];
    if (step <= 0) throw ValidationError("timestamps must be strictly increasing");
    for (std::size_t i = 2; i < times.size(); ++i) {
      if (times[i] - times[i - 1] != step) {
        std::ostringstream os;
        os << "timestamps are not uniformly spaced at data row " << i + 1;
        throw ValidationError(os.str());
      }
    }
    s.dt_hours = static_cast<double>(step) / 3600.0;
  }
  s.validate();
  return s;
}

ScenarioSeries load_scenario_csv(const std::filesystem::path& path, const CsvLoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  try {
    return parse_scenario_csv(in, options);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.row(), e.column());
  }
}

void write_scenario_csv(const ScenarioSeries& scenario, std::ostream& out) {
  out << "timestamp,load_kw,pv_kw,price_spot\n";
  const auto step = static_cast<std::int64_t>(std::llround(scenario.dt_hours * 3600.0));
  const std::int64_t origin = parse_iso8601("2022-01-01T00:00:00");
  for (std::size_t t = 0; t < scenario.size(); ++t) {
    const std::string stamp = scenario.timestamps.empty()
                                  ? format_iso8601(origin + static_cast<std::int64_t>(t) * step)
                                  : scenario.timestamps[t];
    out << stamp << ',' << format_double(scenario.load_kw[t]) << ','
        << format_double(scenario.pv_kw[t]) << ',' << format_double(scenario.price_sell[t])
        << '\n';
  }
}

void write_scenario_csv(const ScenarioSeries& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_scenario_csv(scenario, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace battsched
