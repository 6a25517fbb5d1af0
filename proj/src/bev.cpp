#include "gridv2g/bev.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "gridv2g/errors.hpp"
#include "gridv2g/format.hpp"

namespace gridv2g {

void BevFleetSpec::validate() const {
  if (!(fleet_millions >= 0.0)) throw ConfigError("fleet size must be >= 0");
  if (!(daily_energy_kwh > 0.0)) throw ConfigError("daily energy per vehicle must be > 0");
  if (!(battery_kwh > 0.0)) throw ConfigError("battery capacity per vehicle must be > 0");
  if (!(night_fraction > 0.0 && night_fraction <= 1.0)) {
    throw ConfigError("night_fraction must be in (0, 1]");
  }
  if (day_start_hour < 0 || day_end_hour > 24 || day_start_hour >= day_end_hour) {
    throw ConfigError("day window must satisfy 0 <= start < end <= 24");
  }
  if (!(initial_soc_fraction >= 0.0 && initial_soc_fraction <= 1.0)) {
    throw ConfigError("initial_soc_fraction must be in [0, 1]");
  }
  if (v2g_power_limit && !(*v2g_power_limit >= 0.0)) {
    throw ConfigError("v2g_power_limit must be >= 0");
  }
  if (!(round_trip_efficiency > 0.0 && round_trip_efficiency <= 1.0)) {
    throw ConfigError("round_trip_efficiency must be in (0, 1]");
  }
}

FleetAggregates fleet_aggregates(const BevFleetSpec& spec) {
  spec.validate();
  return {spec.fleet_millions * spec.daily_energy_kwh / 24.0,
          spec.fleet_millions * spec.battery_kwh};
}

bool is_daytime(Timestamp t, const BevFleetSpec& spec) {
  using namespace std::chrono;
  const auto since_midnight = t - floor<days>(t);
  const auto hour = duration_cast<hours>(since_midnight).count();
  return hour >= spec.day_start_hour && hour < spec.day_end_hour;
}

ConsumptionProfile consumption_profile(const BevFleetSpec& spec, const WeekSeries& week) {
  const auto agg = fleet_aggregates(spec);
  const auto n = week.size();
  std::vector<bool> day(n);
  std::size_t n_day = 0;
  for (std::size_t i = 0; i < n; ++i) {
    day[i] = is_daytime(week.time_at(i), spec);
    n_day += day[i] ? 1 : 0;
  }
  // Solve mean(profile) = mean_power with night = night_fraction * day.
  const double weight = static_cast<double>(n_day) +
                        spec.night_fraction * static_cast<double>(n - n_day);
  ConsumptionProfile out;
  out.day_power = weight > 0.0 ? agg.mean_power * static_cast<double>(n) / weight : 0.0;
  out.night_power = spec.night_fraction * out.day_power;
  out.power.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.power[i] = day[i] ? out.day_power : out.night_power;
  return out;
}

ChargeSchedule leveling_schedule(const WeekSeries& week, const BevFleetSpec& spec) {
  const auto agg = fleet_aggregates(spec);
  ChargeSchedule out;
  out.level = week.mean_demand() + agg.mean_power;
  out.charge.resize(week.size());
  for (std::size_t i = 0; i < week.size(); ++i) {
    double c = out.level - week.demand[i];
    if (spec.v2g_power_limit && c < -*spec.v2g_power_limit) {
      ++out.clipped_samples;
      out.clipped_energy += (-*spec.v2g_power_limit - c) * kSampleHours;
      c = -*spec.v2g_power_limit;
    }
    out.charge[i] = c;
  }
  return out;
}

SocTrajectory soc_trajectory(const ChargeSchedule& schedule, std::span<const double> consumption,
                             const BevFleetSpec& spec) {
  const auto agg = fleet_aggregates(spec);
  if (consumption.size() != schedule.charge.size()) {
    throw InputError("charge schedule and consumption series differ in length");
  }
  const double eff = std::sqrt(spec.round_trip_efficiency);
  SocTrajectory out;
  out.capacity = agg.storage_capacity;
  out.energy.resize(consumption.size() + 1);
  out.energy[0] = spec.initial_soc_fraction * agg.storage_capacity;
  for (std::size_t i = 0; i < consumption.size(); ++i) {
    const double c = schedule.charge[i];
    const double stored = c >= 0.0 ? c * eff : c / eff;
    out.energy[i + 1] = out.energy[i] + (stored - consumption[i]) * kSampleHours;
  }
  const auto [lo, hi] = std::minmax_element(out.energy.begin(), out.energy.end());
  out.min_energy = *lo;
  out.max_energy = *hi;
  for (std::size_t i = 0; i < out.energy.size(); ++i) {
    const double e = out.energy[i];
    const double excursion = e < 0.0 ? -e : (e > out.capacity ? e - out.capacity : 0.0);
    if (excursion > out.worst_excursion) {
      out.worst_excursion = excursion;
      out.worst_index = i;
    }
  }
  out.feasible = out.worst_excursion == 0.0;
  return out;
}

namespace {

struct GtAccumulator {
  double peak = 0.0;
  double sum = 0.0;
  std::size_t count = 0;

  void add(const WeekSeries& week, std::span<const double> consumption, double base,
           std::span<const double> wind) {
    for (std::size_t i = 0; i < week.size(); ++i) {
      const double gt =
          std::max(0.0, week.demand[i] + consumption[i] - base - week.solar[i] - wind[i]);
      peak = std::max(peak, gt);
      sum += gt;
    }
    count += week.size();
  }

  [[nodiscard]] UnmanagedResult result() const {
    const double m = count > 0 ? sum / static_cast<double>(count) : 0.0;
    return {peak, m, peak > 0.0 ? m / peak : 0.0};
  }
};

}  // namespace

UnmanagedResult unmanaged_peak(const WeekSeries& week, const BevFleetSpec& spec, double base,
                               std::span<const double> wind) {
  if (wind.size() != week.size()) throw InputError("wind trace not aligned with week");
  const auto u = consumption_profile(spec, week);
  GtAccumulator acc;
  acc.add(week, u.power, base, wind);
  return acc.result();
}

UnmanagedResult unmanaged_year(const NormalizedYear& year, const BevFleetSpec& spec, double base,
                               double capacity) {
  GtAccumulator acc;
  for (const auto& week : year.weeks) {
    const auto u = consumption_profile(spec, week);
    const auto wind = extrapolate_wind(week.wind, year.reference_capacity, capacity);
    acc.add(week, u.power, base, wind);
  }
  return acc.result();
}

void write_schedule_csv(std::ostream& os, const WeekSeries& week, const ChargeSchedule& schedule,
                        std::span<const double> consumption, const SocTrajectory& soc) {
  os << "timestamp,demand_gw,charge_gw,consumption_gw,soc_gwh\n";
  for (std::size_t i = 0; i < week.size(); ++i) {
    os << format_timestamp(week.time_at(i)) << ',' << num(week.demand[i]) << ','
       << num(schedule.charge[i]) << ',' << num(consumption[i]) << ',' << num(soc.energy[i])
       << '\n';
  }
}

}  // namespace gridv2g
