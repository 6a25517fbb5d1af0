#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gridv2g/bev.hpp"
#include "gridv2g/curves.hpp"
#include "gridv2g/dispatch.hpp"
#include "gridv2g/scaling.hpp"

namespace gridv2g {

struct ScenarioConstants {
  double gas_carbon_intensity = 4.8;      // MT p.a. per GWe of gas generation
  double baseline_fleet_emissions = 66.3;  // MT p.a. for the reference fleet
  double baseline_fleet_millions = 35.0;
  double battery_unit_cost = 255.0;  // EUR/kWh: 155 cell + 100 charger
  double baseline_wind_gwe = 6.0;    // output of the existing 20 GWc fleet

  void validate() const;
};

struct FleetSizingRow {
  double fleet_millions = 0.0;
  double mean_power = 0.0;           // GWe
  double required_wind_gwe = 0.0;    // baseline wind + fleet power
  double wind_capacity = 0.0;        // GWc
  double storage = 0.0;              // GWh
  double emissions_reduction = 0.0;  // MT p.a.
  double battery_cost = 0.0;         // EUR bn
};

/// Emissions and battery-cost columns; linear in fleet size.
FleetSizingRow fleet_row_arithmetic(const BevFleetSpec& fleet, const ScenarioConstants& consts);

struct Table2Options {
  double base_generation = 13.0;
  std::vector<double> capacities = default_capacity_grid();
  double refine_step = 2.5;
  SweepOptions sweep;
};

/// For each fleet size: the leveled-demand curve for that fleet is inverted at
/// baseline_wind_gwe + fleet mean power. A zero fleet needs only the
/// reference fleet.
std::vector<FleetSizingRow> build_table2(const NormalizedYear& year,
                                         std::span<const double> fleet_sizes,
                                         const BevFleetSpec& fleet_template,
                                         const ScenarioConstants& consts,
                                         const Table2Options& options = {});

struct LullCapacityResult {
  double capacity = 0.0;  // GWc
  double mean_wind = 0.0;
  double min_wind = 0.0;
  double peak_gas_turbine = 0.0;
  double mean_gas_turbine = 0.0;
  double gt_energy = 0.0;  // GWh
};

struct LullReport {
  int week = 0;
  double mean_demand = 0.0;
  double peak_demand = 0.0;
  double level = 0.0;  // GWe
  double base_generation = 0.0;
  std::vector<LullCapacityResult> per_capacity;

  /// The largest capacity studied.
  [[nodiscard]] const LullCapacityResult& headline() const { return per_capacity.back(); }
};

/// Leveled dispatch of one week at each capacity.
LullReport lull_report(const WeekSeries& week, double reference_capacity,
                       const BevFleetSpec& spec, double base, std::span<const double> capacities);

/// Annual mean gas-turbine output under leveled dispatch at one capacity.
double annual_mean_gas_turbine(const NormalizedYear& year, const BevFleetSpec& spec, double base,
                               double capacity);

/// mean / capacity; throws ConfigError for a non-positive capacity.
double gt_utilization(double annual_mean_gt, double capacity);

struct EmissionsRow {
  const char* sector;
  double mt_1990;
  double mt_2017;
};

/// UK carbon emissions by sector, MT p.a.; static reference data.
std::span<const EmissionsRow> uk_emissions_reference();

/// Round half away from zero at `decimals` places, for display only.
double display_round(double x, int decimals);

void write_emissions_csv(std::ostream& os);
void write_table2_csv(std::ostream& os, std::span<const FleetSizingRow> rows);
void write_lull_csv(std::ostream& os, const LullReport& report);
void write_lull_summary(std::ostream& os, const LullReport& report);

}  // namespace gridv2g
