#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "battsched/config.hpp"
#include "battsched/errors.hpp"
#include "battsched/report.hpp"
#include "battsched/scenario_io.hpp"
#include "battsched/synthetic.hpp"

using namespace battsched;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(BATTSCHED_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("tariff is added to the spot price") {
  std::istringstream in(
      "timestamp,load_kw,pv_kw,price_spot\n"
      "2022-05-01T00:00:00,1.0,0.0,0.1\n"
      "2022-05-01T01:00:00,2.0,0.5,0.2\n"
      "2022-05-01T02:00:00,1.5,3.0,0.3\n");
  const auto s = parse_scenario_csv(in, CsvLoadOptions{0.2, 1.0});
  REQUIRE(s.size() == 3);
  CHECK(s.price_buy[0] == doctest::Approx(0.3));
  CHECK(s.price_buy[1] == doctest::Approx(0.4));
  CHECK(s.price_buy[2] == doctest::Approx(0.5));
  CHECK(s.price_sell == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(s.dt_hours == 1.0);
  CHECK(s.timestamps[2] == "2022-05-01T02:00:00");
}

TEST_CASE("interval length follows the timestamp spacing") {
  std::istringstream in(
      "price_spot,timestamp,pv_kw,load_kw,note\n"
      "0.1,2022-05-01T00:00,0,1,a\n"
      "0.1,2022-05-01T00:15,0,1,b\n"
      "0.1,2022-05-01T00:30,0,1,c\n");
  const auto s = parse_scenario_csv(in);
  CHECK(s.dt_hours == 0.25);
  CHECK(s.load_kw == std::vector<double>{1, 1, 1});
}

TEST_CASE("malformed inputs raise located errors") {
  {
    std::istringstream in("timestamp,load_kw,pv_kw,price_spot\n2022-05-01T00:00:00,1,-0.5,0.1\n");
    try {
      parse_scenario_csv(in);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("row 2") != std::string::npos);
      CHECK(std::string(e.what()).find("pv_kw") != std::string::npos);
    }
  }
  {
    std::istringstream in("timestamp,load_kw,pv_kw,price_spot\n");
    try {
      parse_scenario_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("no data rows") != std::string::npos);
    }
  }
  {
    std::istringstream in("timestamp,load_kw,pv_kw,price_spot\n2022-05-01T00:00:00,1,abc,0.1\n");
    try {
      parse_scenario_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
      CHECK(e.column() == 3);
    }
  }
  {
    std::istringstream in("timestamp,load_kw,pv_kw,price_spot\n2022-05-01T00:00:00,1,0\n");
    CHECK_THROWS_AS(parse_scenario_csv(in), ParseError);
  }
  {
    std::istringstream in("timestamp,load_kw,price_spot\n2022-05-01T00:00:00,1,0.1\n");
    CHECK_THROWS_AS(parse_scenario_csv(in), SchemaError);
  }
  {
    std::istringstream in("timestamp,load_kw,pv_kw,price_spot\n2022-13-01T00:00:00,1,0,0.1\n");
    CHECK_THROWS_AS(parse_scenario_csv(in), ParseError);
  }
  CHECK_THROWS_AS(load_scenario_csv("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("timestamps round trip") {
  const auto t = parse_iso8601("2022-05-01T13:45:00");
  CHECK(format_iso8601(t) == "2022-05-01T13:45:00");
  CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601("2024-03-01T00:00:00") - parse_iso8601("2024-02-28T00:00:00") == 2 * 86400);
}

TEST_CASE("synthetic series is deterministic and shaped") {
  SyntheticSpec spec;
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  CHECK(a.size() == 720);
  CHECK(a.load_kw == b.load_kw);
  CHECK(a.pv_kw == b.pv_kw);
  CHECK(a.price_buy == b.price_buy);
  spec.seed = 2;
  CHECK(generate_synthetic(spec).price_sell != a.price_sell);
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double hour = static_cast<double>(t % 24) + 0.5;
    if (hour < spec.sunrise_hour || hour > spec.sunset_hour) REQUIRE(a.pv_kw[t] == 0.0);
    REQUIRE(a.price_buy[t] == doctest::Approx(a.price_sell[t] + 0.2).epsilon(1e-12));
    REQUIRE(a.load_kw[t] > 0.0);
  }
  spec.days = 0;
  CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);
}

TEST_CASE("scenario CSV round trip is exact") {
  const fs::path dir = scratch("roundtrip");
  SyntheticSpec spec;
  spec.days = 4;
  const auto s = generate_synthetic(spec);
  write_scenario_csv(s, dir / "s.csv");
  const auto back = load_scenario_csv(dir / "s.csv", CsvLoadOptions{0.2, 1.0});
  CHECK(back.load_kw == s.load_kw);
  CHECK(back.pv_kw == s.pv_kw);
  CHECK(back.price_sell == s.price_sell);
  CHECK(back.timestamps == s.timestamps);
  CHECK(back.dt_hours == s.dt_hours);
  for (std::size_t t = 0; t < s.size(); ++t) {
    REQUIRE(back.price_buy[t] == s.price_sell[t] + 0.2);
  }
}

TEST_CASE("report files have the documented layout") {
  const fs::path dir = scratch("report");
  SyntheticSpec spec;
  spec.days = 2;
  const auto s = generate_synthetic(spec);
  const std::vector<MethodSpec> methods{
      {"scm", [] { return std::make_unique<ScmController>(ScmConfig{0.1}); }},
      {"stochastic", [] { return std::make_unique<StochasticController>(SrrConfig{}); }}};
  const auto cmp = run_comparison(s, methods, BatteryParams{}, ExternalSignalConfig{}, {1, 2}, true);
  emit_report(cmp, BatteryParams{}, dir);

  const auto report = read_csv(dir / "report.csv");
  REQUIRE(report.size() == 3);
  CHECK(report[0] == std::vector<std::string>{"method", "cost", "cost_stderr", "runs"});
  CHECK(report[1][0] == "scm");
  CHECK(report[2][0] == "stochastic");
  const auto timing = read_csv(dir / "timing.csv");
  REQUIRE(timing.size() == 3);
  CHECK(timing[0] == std::vector<std::string>{"method", "runtime_s"});
  CHECK(fs::exists(dir / "report.txt"));

  for (const char* name : {"scm_seed1.csv", "stochastic_seed1.csv", "stochastic_seed2.csv"}) {
    const auto rows = read_csv(dir / "trajectories" / name);
    REQUIRE(rows.size() == s.size() + 1);
    CHECK(rows[0] == std::vector<std::string>{"interval", "soc", "charge", "discharge", "buy",
                                              "sell", "cost"});
    for (std::size_t r = 1; r < rows.size(); ++r) {
      REQUIRE(rows[r].size() == 7);
      for (const auto& f : rows[r]) REQUIRE_NOTHROW((void)std::stod(f));
    }
  }
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "[scenario]\ndays = 3\nseed = 4\ntariff_adder = 0.25\n"
      "[battery]\ncharge_rate_kw = 5\n"
      "[scm]\ndeadband_kw = 0.5\n[mpc]\nhorizon = 12\n"
      "[stochastic]\nk_charge = 0.4\nk_discharge = 0.2\n"
      "[signals]\nprobability = 0.1\n"
      "[run]\ncontrollers = scm, stochastic\nseed_count = 3\noutput_dir = results\n"
      "[sweep]\nprobabilities = 0, 0.2\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.synthetic.days == 3);
  CHECK(cfg.synthetic.seed == 4);
  CHECK(cfg.tariff_adder == 0.25);
  CHECK(cfg.battery.charge_rate_kw == 5.0);
  CHECK(cfg.scm.deadband_kw == 0.5);
  CHECK(cfg.mpc.horizon == 12);
  CHECK(cfg.stochastic.k_charge == 0.4);
  CHECK(cfg.stochastic.k_discharge == 0.2);
  CHECK(cfg.signals.probability == 0.1);
  CHECK(cfg.controllers == std::vector<std::string>{"scm", "stochastic"});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(cfg.output_dir == fs::path("results"));
  CHECK(cfg.probabilities == std::vector<double>{0.0, 0.2});
  CHECK(load_scenario(cfg).size() == 72);
}

TEST_CASE("config rejects invalid values before running") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
  };
  CHECK_THROWS_AS(parse("[bogus]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[scm]\nwidth = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[scm]\ndeadband_kw = abc\n"), ConfigError);
  CHECK_THROWS(parse("[scm]\ndeadband_kw = -1\n"));
  CHECK_THROWS(parse("[battery]\nsoc_min = 0.95\n"));
  CHECK_THROWS(parse("[signals]\nprobability = 2\n"));
  CHECK_THROWS(parse("[stochastic]\nepsilon = 0.5\n"));
  CHECK_THROWS(parse("[mpc]\nhorizon = 0\n"));
  CHECK_THROWS(parse("[run]\ncontrollers = scm, fancy\n"));
  CHECK_THROWS(parse("[scenario]\ncsv = /does/not/exist.csv\n"));
}

TEST_CASE("identical runs write identical bytes") {
  SyntheticSpec spec;
  spec.days = 2;
  const auto s = generate_synthetic(spec);
  const std::vector<MethodSpec> methods{
      {"stochastic", [] { return std::make_unique<StochasticController>(SrrConfig{}); }}};
  const fs::path a = scratch("bytes_a"), b = scratch("bytes_b");
  emit_report(run_comparison(s, methods, BatteryParams{}, ExternalSignalConfig{0.1, 0.5}, {3}, true),
              BatteryParams{}, a);
  emit_report(run_comparison(s, methods, BatteryParams{}, ExternalSignalConfig{0.1, 0.5}, {3}, true),
              BatteryParams{}, b);
  CHECK(slurp(a / "report.csv") == slurp(b / "report.csv"));
  CHECK(slurp(a / "trajectories" / "stochastic_seed3.csv") ==
        slurp(b / "trajectories" / "stochastic_seed3.csv"));
}

}  // TEST_SUITE
