#include "gridv2g/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "gridv2g/errors.hpp"
#include "gridv2g/format.hpp"

namespace gridv2g {

void ScenarioConstants::validate() const {
  if (!(gas_carbon_intensity > 0.0 && baseline_fleet_emissions > 0.0 &&
        baseline_fleet_millions > 0.0 && battery_unit_cost > 0.0 && baseline_wind_gwe > 0.0)) {
    throw ConfigError("scenario constants must all be > 0");
  }
}

FleetSizingRow fleet_row_arithmetic(const BevFleetSpec& fleet, const ScenarioConstants& consts) {
  consts.validate();
  const auto agg = fleet_aggregates(fleet);
  FleetSizingRow row;
  row.fleet_millions = fleet.fleet_millions;
  row.mean_power = agg.mean_power;
  row.required_wind_gwe = consts.baseline_wind_gwe + agg.mean_power;
  row.storage = agg.storage_capacity;
  row.emissions_reduction =
      consts.baseline_fleet_emissions * fleet.fleet_millions / consts.baseline_fleet_millions;
  // GWh x EUR/kWh = 1e6 EUR; divide by 1e3 for EUR bn.
  row.battery_cost = agg.storage_capacity * consts.battery_unit_cost / 1000.0;
  return row;
}

std::vector<FleetSizingRow> build_table2(const NormalizedYear& year,
                                         std::span<const double> fleet_sizes,
                                         const BevFleetSpec& fleet_template,
                                         const ScenarioConstants& consts,
                                         const Table2Options& options) {
  std::vector<FleetSizingRow> rows;
  rows.reserve(fleet_sizes.size());
  for (const double size : fleet_sizes) {
    BevFleetSpec fleet = fleet_template;
    fleet.fleet_millions = size;
    auto row = fleet_row_arithmetic(fleet, consts);
    if (size == 0.0) {
      row.wind_capacity = year.reference_capacity;
    } else {
      const BevFamily family{fleet, options.base_generation};
      row.wind_capacity = size_wind_fleet(year, family, row.required_wind_gwe, options.capacities,
                                          options.refine_step, options.sweep)
                              .capacity;
    }
    rows.push_back(row);
  }
  return rows;
}

LullReport lull_report(const WeekSeries& week, double reference_capacity,
                       const BevFleetSpec& spec, double base, std::span<const double> capacities) {
  if (capacities.empty()) throw ConfigError("lull report needs at least one capacity");
  const auto schedule = leveling_schedule(week, spec);
  LullReport report;
  report.week = week.index;
  report.mean_demand = week.mean_demand();
  report.peak_demand = *std::max_element(week.demand.begin(), week.demand.end());
  report.level = schedule.level;
  report.base_generation = base;
  const DispatchConfig cfg{base, CapMode::Leveled, schedule.level};
  for (const double c : capacities) {
    const auto s = summarize_week(week, WindFleet{reference_capacity, c}, cfg);
    const double mean_wind = mean(week.wind) * c / reference_capacity;
    report.per_capacity.push_back({c, mean_wind, s.min_wind_available, s.peak_gas_turbine,
                                   s.mean_gas_turbine, s.gt_energy});
  }
  return report;
}

double annual_mean_gas_turbine(const NormalizedYear& year, const BevFleetSpec& spec, double base,
                               double capacity) {
  const double bev_power = fleet_aggregates(spec).mean_power;
  double sum = 0.0;
  for (const auto& week : year.weeks) {
    const DispatchConfig cfg{base, CapMode::Leveled, week.mean_demand() + bev_power};
    sum += summarize_week(week, WindFleet{year.reference_capacity, capacity}, cfg).mean_gas_turbine;
  }
  return year.weeks.empty() ? 0.0 : sum / static_cast<double>(year.weeks.size());
}

double gt_utilization(double annual_mean_gt, double capacity) {
  if (!(capacity > 0.0)) throw ConfigError("gas turbine capacity must be > 0");
  return annual_mean_gt / capacity;
}

double display_round(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

std::span<const EmissionsRow> uk_emissions_reference() {
  static constexpr std::array<EmissionsRow, 6> rows{{
      {"Energy Supply", 242.1, 105.0},
      {"Business", 111.9, 65.8},
      {"Transport", 125.3, 124.4},
      {"Residential", 78.4, 64.1},
      {"Other", 36.4, 7.4},
      {"Total", 594.1, 366.7},
  }};
  return rows;
}

void write_emissions_csv(std::ostream& os) {
  os << "sector,mt_1990,mt_2017\n";
  for (const auto& r : uk_emissions_reference()) {
    os << r.sector << ',' << num(r.mt_1990) << ',' << num(r.mt_2017) << '\n';
  }
}

void write_table2_csv(std::ostream& os, std::span<const FleetSizingRow> rows) {
  os << "fleet_millions,mean_power_gwe,required_wind_gwe,wind_capacity_gwc,storage_gwh,"
        "emissions_reduction_mt,battery_cost_eur_bn,"
        "display_power_gwe,display_capacity_gwc,display_storage_gwh,display_emissions_mt,"
        "display_cost_eur_bn\n";
  for (const auto& r : rows) {
    os << num(r.fleet_millions) << ',' << num(r.mean_power) << ',' << num(r.required_wind_gwe)
       << ',' << num(r.wind_capacity) << ',' << num(r.storage) << ','
       << num(r.emissions_reduction) << ',' << num(r.battery_cost) << ','
       << fmt::format("{:.1f},{:.1f},{:.0f},{:.1f},{:.0f}", display_round(r.mean_power, 1),
                      display_round(r.wind_capacity, 1), display_round(r.storage, 0),
                      display_round(r.emissions_reduction, 1), display_round(r.battery_cost, 0))
       << '\n';
  }
}

void write_lull_csv(std::ostream& os, const LullReport& report) {
  os << "capacity_gwc,mean_wind_gwe,min_wind_gwe,peak_gt_gwe,mean_gt_gwe,gt_energy_gwh\n";
  for (const auto& r : report.per_capacity) {
    os << num(r.capacity) << ',' << num(r.mean_wind) << ',' << num(r.min_wind) << ','
       << num(r.peak_gas_turbine) << ',' << num(r.mean_gas_turbine) << ',' << num(r.gt_energy)
       << '\n';
  }
}

void write_lull_summary(std::ostream& os, const LullReport& report) {
  const auto& h = report.headline();
  os << fmt::format("week {}: mean demand {:.1f} GWe, peak demand {:.1f} GWe\n", report.week,
                    report.mean_demand, report.peak_demand)
     << fmt::format("level {:.1f} GWe, base generation {:.1f} GWe\n", report.level,
                    report.base_generation)
     << fmt::format("at {:.0f} GWc: peak GT {:.1f} GWe, mean GT {:.1f} GWe, GT energy {:.0f} GWh "
                    "(= mean x 168 h), min wind {:.2f} GWe\n",
                    h.capacity, h.peak_gas_turbine, h.mean_gas_turbine, h.gt_energy, h.min_wind);
}

}  // namespace gridv2g
