#include "gridv2g/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "gridv2g/errors.hpp"
#include "gridv2g/format.hpp"

namespace gridv2g {

void DispatchConfig::validate() const {
  // Negative base is legal: headroom families above the mean demand need it.
  if (!std::isfinite(base_generation)) throw ConfigError("base generation must be finite");
  if (cap_mode == CapMode::Leveled) {
    if (!level) throw ConfigError("leveled dispatch requires a level");
    if (!(*level > 0.0)) throw ConfigError("dispatch level must be > 0");
  }
}

namespace {

void check_inputs(const WeekSeries& week, const WindFleet& fleet, const DispatchConfig& cfg) {
  cfg.validate();
  if (!(fleet.capacity >= 0.0) || !(fleet.reference_capacity > 0.0)) {
    throw ConfigError("wind capacities must be positive");
  }
  if (week.wind.size() != week.size() || week.solar.size() != week.size() || week.size() == 0) {
    throw InputError(fmt::format("week {} has inconsistent or empty series", week.index));
  }
}

template <typename Sink>
DispatchSummary run(const WeekSeries& week, const WindFleet& fleet, const DispatchConfig& cfg,
                    Sink&& sink) {
  check_inputs(week, fleet, cfg);
  const double ratio = fleet.ratio();
  DispatchSummary s;
  s.min_wind_available = std::numeric_limits<double>::infinity();
  double used_sum = 0.0, gt_sum = 0.0, curtailed_sum = 0.0;
  for (std::size_t i = 0; i < week.size(); ++i) {
    const double available = week.wind[i] * ratio;
    const double room = cfg.cap_at(week.demand[i]) - cfg.base_generation - week.solar[i];
    const double used = std::clamp(room, 0.0, available);
    const double curtailed = available - used;
    const double gt = std::max(0.0, room - used);
    sink(i, available, used, curtailed, gt);
    used_sum += used;
    gt_sum += gt;
    curtailed_sum += curtailed;
    s.peak_gas_turbine = std::max(s.peak_gas_turbine, gt);
    s.min_wind_available = std::min(s.min_wind_available, available);
  }
  const auto n = static_cast<double>(week.size());
  s.mean_wind_used = used_sum / n;
  s.mean_gas_turbine = gt_sum / n;
  s.gt_energy = gt_sum * kSampleHours;
  s.curtailed_energy = curtailed_sum * kSampleHours;
  return s;
}

}  // namespace

DispatchResult dispatch_week(const WeekSeries& week, const WindFleet& fleet,
                             const DispatchConfig& cfg) {
  DispatchResult r;
  const auto n = week.size();
  r.wind_available.resize(n);
  r.wind_used.resize(n);
  r.wind_curtailed.resize(n);
  r.gas_turbine.resize(n);
  r.summary = run(week, fleet, cfg,
                  [&](std::size_t i, double available, double used, double curtailed, double gt) {
                    r.wind_available[i] = available;
                    r.wind_used[i] = used;
                    r.wind_curtailed[i] = curtailed;
                    r.gas_turbine[i] = gt;
                  });
  return r;
}

DispatchSummary summarize_week(const WeekSeries& week, const WindFleet& fleet,
                               const DispatchConfig& cfg) {
  return run(week, fleet, cfg, [](std::size_t, double, double, double, double) {});
}

EnergyBalance surplus_deficit(const WeekSeries& week, const WindFleet& fleet,
                              const DispatchConfig& cfg, SampleWindow window) {
  check_inputs(week, fleet, cfg);
  if (window.begin >= window.end) throw ConfigError("empty sample window");
  if (window.end > week.size()) {
    throw ConfigError(fmt::format("window end {} beyond week of {} samples", window.end,
                                  week.size()));
  }
  const double ratio = fleet.ratio();
  double deficit = 0.0, surplus = 0.0;
  for (std::size_t i = window.begin; i < window.end; ++i) {
    const double net = cfg.cap_at(week.demand[i]) - cfg.base_generation - week.solar[i] -
                       week.wind[i] * ratio;
    if (net > 0.0) {
      deficit += net;
    } else {
      surplus -= net;
    }
  }
  return {deficit * kSampleHours, surplus * kSampleHours};
}

WeekSeries flatten_demand(WeekSeries week) {
  const double m = week.mean_demand();
  std::fill(week.demand.begin(), week.demand.end(), m);
  return week;
}

void write_dispatch_csv(std::ostream& os, const WeekSeries& week, const DispatchConfig& cfg,
                        const DispatchResult& result) {
  os << "timestamp,demand_gw,base_gw,solar_gw,wind_used_gw,wind_curtailed_gw,gas_turbine_gw\n";
  for (std::size_t i = 0; i < week.size(); ++i) {
    os << format_timestamp(week.time_at(i)) << ',' << num(week.demand[i]) << ','
       << num(cfg.base_generation) << ',' << num(week.solar[i]) << ','
       << num(result.wind_used[i]) << ',' << num(result.wind_curtailed[i]) << ','
       << num(result.gas_turbine[i]) << '\n';
  }
}

}  // namespace gridv2g
