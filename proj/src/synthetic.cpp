#include "battsched/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "battsched/errors.hpp"
#include "battsched/rng.hpp"
#include "battsched/scenario_io.hpp"

namespace battsched {

namespace {

// Gaussian bump on the 24 h circle.
double bump(double hour, double centre, double width) {
  double d = std::abs(hour - centre);
  d = std::min(d, 24.0 - d);
  return std::exp(-0.5 * (d / width) * (d / width));
}

double load_shape(double h) {
  return 0.45 + 0.8 * bump(h, 7.5, 1.2) + 1.4 * bump(h, 19.0, 2.0) + 0.25 * bump(h, 13.0, 3.0);
}

double price_shape(double h) {
  return 0.07 * bump(h, 8.0, 1.5) + 0.14 * bump(h, 18.5, 2.0) - 0.04 * bump(h, 13.5, 2.0) -
         0.06 * bump(h, 3.0, 2.5);
}

}  // namespace

void SyntheticSpec::validate() const {
  if (days < 1) throw ValidationError("synthetic days must be >= 1");
  if (!(dt_hours > 0) || dt_hours > 24) throw ValidationError("synthetic dt_hours must be in (0, 24]");
  const double per_day = 24.0 / dt_hours;
  if (std::abs(per_day - std::round(per_day)) > 1e-9) {
    throw ValidationError("synthetic dt_hours must divide 24 h evenly");
  }
  if (!(spot_swing >= 0) || !(spot_drift >= 0)) {
    throw ValidationError("synthetic spot_swing and spot_drift must be >= 0");
  }
  if (!(pv_peak_kw >= 0) || !(mean_load_kw > 0)) {
    throw ValidationError("synthetic pv_peak_kw must be >= 0 and mean_load_kw > 0");
  }
  if (!(sunrise_hour >= 0 && sunrise_hour < sunset_hour && sunset_hour <= 24)) {
    throw ValidationError("synthetic daylight window must satisfy 0 <= sunrise < sunset <= 24");
  }
}

ScenarioSeries generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto per_day = static_cast<std::size_t>(std::llround(24.0 / spec.dt_hours));
  const std::size_t total = spec.days * per_day;

  Rng day_rng(derive_seed(spec.seed, 10));
  Rng noise_rng(derive_seed(spec.seed, 11));

  // Normalise the load shape so the daily mean matches mean_load_kw.
  double shape_mean = 0.0;
  for (std::size_t i = 0; i < per_day; ++i) {
    shape_mean += load_shape((static_cast<double>(i) + 0.5) * spec.dt_hours);
  }
  shape_mean /= static_cast<double>(per_day);
  const double load_scale = spec.mean_load_kw / shape_mean;

  ScenarioSeries s;
  s.dt_hours = spec.dt_hours;
  s.load_kw.reserve(total);
  s.pv_kw.reserve(total);
  s.price_buy.reserve(total);
  s.price_sell.reserve(total);
  s.timestamps.reserve(total);
  const std::int64_t origin = parse_iso8601(spec.start);
  const auto step = static_cast<std::int64_t>(std::llround(spec.dt_hours * 3600.0));

  double level_drift = 0.0;
  const double daylight = spec.sunset_hour - spec.sunrise_hour;
  for (std::size_t d = 0; d < spec.days; ++d) {
    level_drift = 0.7 * level_drift + spec.spot_drift * day_rng.normal();
    const double price_level = std::max(0.04, spec.spot_level + level_drift);
    const double price_amplitude = spec.spot_swing * std::clamp(1.0 + 0.3 * day_rng.normal(), 0.4, 1.8);
    const double cloudiness = std::clamp(0.65 + 0.3 * day_rng.normal(), 0.1, 1.0);
    const double load_factor = std::clamp(1.0 + 0.1 * day_rng.normal(), 0.7, 1.3);

    for (std::size_t i = 0; i < per_day; ++i) {
      const double h = (static_cast<double>(i) + 0.5) * spec.dt_hours;

      const double load =
          load_scale * load_factor * load_shape(h) * (1.0 + 0.2 * noise_rng.normal());
      double pv = 0.0;
      const double pv_noise = noise_rng.normal();
      if (h > spec.sunrise_hour && h < spec.sunset_hour) {
        const double elevation = std::sin(std::numbers::pi * (h - spec.sunrise_hour) / daylight);
        pv = spec.pv_peak_kw * std::pow(elevation, 1.3) * cloudiness * (1.0 + 0.15 * pv_noise);
        pv = std::clamp(pv, 0.0, spec.pv_peak_kw);
      }
      const double spot =
          price_level + price_amplitude * price_shape(h) + 0.012 * noise_rng.normal();

      s.load_kw.push_back(std::max(0.05, load));
      s.pv_kw.push_back(pv);
      s.price_sell.push_back(spot);
      s.price_buy.push_back(spot + spec.tariff_adder);
      s.timestamps.push_back(
          format_iso8601(origin + static_cast<std::int64_t>(d * per_day + i) * step));
    }
  }
  s.validate();
  return s;
}

}  // namespace battsched
