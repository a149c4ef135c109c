#include "battsched/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "battsched/errors.hpp"
#include "battsched/scenario_io.hpp"

namespace battsched {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("'" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario",
       {"csv", "days", "dt_hours", "seed", "tariff_adder", "mean_load_kw", "pv_peak_kw",
        "spot_level", "spot_swing", "spot_drift"}},
      {"battery",
       {"nominal_capacity_kwh", "charge_rate_kw", "discharge_rate_kw", "eff_charge",
        "eff_discharge", "soc_max", "soc_min", "soc_init"}},
      {"scm", {"deadband_kw"}},
      {"mpc", {"horizon"}},
      {"stochastic", {"k_charge", "k_discharge", "epsilon"}},
      {"signals", {"probability", "direction_split"}},
      {"run", {"controllers", "seeds", "seed_count", "output_dir"}},
      {"sweep", {"probabilities", "deadbands", "horizons", "k_values"}},
  };
  return keys;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double("list", item));
  return out;
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) throw ConfigError("unknown config section [" + section + "]");
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config key '" + section + "' outside any section");
    }
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
    }
  }

  RunConfig cfg;
  auto get = [&tree](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '/'))) return trim(*v);
    return std::nullopt;
  };
  auto number = [&](const std::string& path, double& target) {
    if (auto v = get(path)) target = to_double(path, *v);
  };

  if (auto v = get("scenario/csv")) {
    std::filesystem::path p(*v);
    cfg.scenario_csv = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (auto v = get("scenario/days")) cfg.synthetic.days = to_unsigned("scenario.days", *v);
  number("scenario/dt_hours", cfg.synthetic.dt_hours);
  if (auto v = get("scenario/seed")) cfg.synthetic.seed = to_unsigned("scenario.seed", *v);
  number("scenario/tariff_adder", cfg.tariff_adder);
  number("scenario/mean_load_kw", cfg.synthetic.mean_load_kw);
  number("scenario/pv_peak_kw", cfg.synthetic.pv_peak_kw);
  number("scenario/spot_level", cfg.synthetic.spot_level);
  number("scenario/spot_swing", cfg.synthetic.spot_swing);
  number("scenario/spot_drift", cfg.synthetic.spot_drift);
  cfg.synthetic.tariff_adder = cfg.tariff_adder;

  number("battery/nominal_capacity_kwh", cfg.battery.nominal_capacity_kwh);
  number("battery/charge_rate_kw", cfg.battery.charge_rate_kw);
  number("battery/discharge_rate_kw", cfg.battery.discharge_rate_kw);
  number("battery/eff_charge", cfg.battery.eff_charge);
  number("battery/eff_discharge", cfg.battery.eff_discharge);
  number("battery/soc_max", cfg.battery.soc_max);
  number("battery/soc_min", cfg.battery.soc_min);
  number("battery/soc_init", cfg.battery.soc_init);

  number("scm/deadband_kw", cfg.scm.deadband_kw);
  if (auto v = get("mpc/horizon")) cfg.mpc.horizon = to_unsigned("mpc.horizon", *v);
  number("stochastic/k_charge", cfg.stochastic.k_charge);
  number("stochastic/k_discharge", cfg.stochastic.k_discharge);
  number("stochastic/epsilon", cfg.stochastic.epsilon);
  number("signals/probability", cfg.signals.probability);
  number("signals/direction_split", cfg.signals.direction_split);

  if (auto v = get("run/controllers")) cfg.controllers = split_list(*v);
  if (auto v = get("run/seeds")) {
    cfg.seeds.clear();
    for (const auto& item : split_list(*v)) cfg.seeds.push_back(to_unsigned("run.seeds", item));
  }
  if (auto v = get("run/seed_count")) {
    if (get("run/seeds")) throw ConfigError("give either run.seeds or run.seed_count, not both");
    const auto count = to_unsigned("run.seed_count", *v);
    cfg.seeds.clear();
    for (std::uint64_t s = 1; s <= count; ++s) cfg.seeds.push_back(s);
  }
  if (auto v = get("run/output_dir")) {
    std::filesystem::path p(*v);
    cfg.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }

  if (auto v = get("sweep/probabilities")) cfg.probabilities = parse_double_list(*v);
  if (auto v = get("sweep/deadbands")) cfg.deadbands = parse_double_list(*v);
  if (auto v = get("sweep/horizons")) {
    cfg.horizons.clear();
    for (const auto& item : split_list(*v)) {
      cfg.horizons.push_back(static_cast<std::size_t>(to_unsigned("sweep.horizons", item)));
    }
  }
  if (auto v = get("sweep/k_values")) cfg.k_values = parse_double_list(*v);

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path());
}

void RunConfig::validate() const {
  if (scenario_csv && !std::filesystem::exists(*scenario_csv)) {
    throw ConfigError("scenario file does not exist: " + scenario_csv->string());
  }
  if (!scenario_csv) synthetic.validate();
  if (!std::isfinite(tariff_adder) || tariff_adder < 0) {
    throw ConfigError("tariff_adder must be >= 0");
  }
  battery.validate();
  scm.validate();
  mpc.validate();
  stochastic.validate();
  signals.validate();
  if (controllers.empty()) throw ConfigError("at least one controller is required");
  for (const auto& name : controllers) {
    if (name != "idle" && name != "scm" && name != "mpc" && name != "stochastic") {
      throw ConfigError("unknown controller '" + name + "'");
    }
  }
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  for (double p : probabilities) {
    ExternalSignalConfig{p, signals.direction_split}.validate();
  }
  for (double d : deadbands) ScmConfig{d}.validate();
  for (std::size_t h : horizons) MpcConfig{h}.validate();
  for (double k : k_values) SrrConfig{k, k, stochastic.epsilon}.validate();
}

ScenarioSeries load_scenario(const RunConfig& config) {
  if (config.scenario_csv) {
    CsvLoadOptions options;
    options.tariff_adder = config.tariff_adder;
    options.default_dt_hours = config.synthetic.dt_hours;
    return load_scenario_csv(*config.scenario_csv, options);
  }
  SyntheticSpec spec = config.synthetic;
  spec.tariff_adder = config.tariff_adder;
  return generate_synthetic(spec);
}

MethodSpec make_method(const std::string& name, const RunConfig& config) {
  if (name == "idle") return {name, [] { return std::make_unique<IdleController>(); }};
  if (name == "scm") {
    return {name, [cfg = config.scm] { return std::make_unique<ScmController>(cfg); }};
  }
  if (name == "mpc") {
    return {name, [cfg = config.mpc] { return std::make_unique<MpcController>(cfg); }};
  }
  if (name == "stochastic") {
    return {name,
            [cfg = config.stochastic] { return std::make_unique<StochasticController>(cfg); }};
  }
  throw ConfigError("unknown controller '" + name + "'");
}

}  // namespace battsched
