#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gridv2g/ingest.hpp"
#include "gridv2g/scaling.hpp"

namespace gridv2g {

/// Aggregate description of a battery-electric-vehicle fleet. The fleet is
/// modelled as one battery with one bidirectional power flow.
struct BevFleetSpec {
  double fleet_millions = 35.0;
  double daily_energy_kwh = 10.0;  // per vehicle
  double battery_kwh = 30.0;       // per vehicle
  /// Night consumption as a fraction of day consumption.
  double night_fraction = 0.2;
  /// Daytime is [day_start_hour, day_end_hour) in UTC; no DST handling.
  int day_start_hour = 6;
  int day_end_hour = 21;
  double initial_soc_fraction = 0.8;
  /// Largest V2G export in GW; unset means unlimited.
  std::optional<double> v2g_power_limit;
  /// Applied symmetrically: charging stores c * sqrt(eta), exporting draws
  /// c / sqrt(eta).
  double round_trip_efficiency = 1.0;

  void validate() const;
};

struct FleetAggregates {
  double mean_power = 0.0;        // GW
  double storage_capacity = 0.0;  // GWh
};

/// Millions of vehicles x kWh is GWh, so mean power is fleet x daily / 24.
FleetAggregates fleet_aggregates(const BevFleetSpec& spec);

bool is_daytime(Timestamp t, const BevFleetSpec& spec);

struct ConsumptionProfile {
  std::vector<double> power;  // GW per sample
  double day_power = 0.0;
  double night_power = 0.0;
};

/// Two-level daily profile whose mean over the week equals the fleet mean
/// power. With the default 15 h day and 0.2 night ratio, day power is
/// mean / 0.7.
ConsumptionProfile consumption_profile(const BevFleetSpec& spec, const WeekSeries& week);

struct ChargeSchedule {
  std::vector<double> charge;  // GW into the fleet; negative is V2G export
  double level = 0.0;          // GWe, demand + charge
  std::size_t clipped_samples = 0;
  double clipped_energy = 0.0;  // GWh of export the limit prevented
};

/// Charge so that grid demand plus fleet charging is flat at the weekly mean
/// demand plus the fleet mean power.
ChargeSchedule leveling_schedule(const WeekSeries& week, const BevFleetSpec& spec);

struct SocTrajectory {
  std::vector<double> energy;  // GWh at each sample boundary, size n + 1
  double capacity = 0.0;
  bool feasible = true;
  double min_energy = 0.0;
  double max_energy = 0.0;
  /// Largest distance outside [0, capacity], 0 when feasible.
  double worst_excursion = 0.0;
  std::size_t worst_index = 0;
};

/// E(t + 1/12 h) = E(t) + (charge - consumption) / 12 starting from the
/// initial state of charge. Nothing is clamped; leaving [0, capacity] marks
/// the trajectory infeasible.
SocTrajectory soc_trajectory(const ChargeSchedule& schedule, std::span<const double> consumption,
                             const BevFleetSpec& spec);

struct UnmanagedResult {
  double peak_gas_turbine = 0.0;  // GWe
  double mean_gas_turbine = 0.0;  // GWe
  double utilization = 0.0;       // mean / peak
};

/// Fleet charges exactly as it consumes, on top of grid demand.
UnmanagedResult unmanaged_peak(const WeekSeries& week, const BevFleetSpec& spec, double base,
                               std::span<const double> wind);
UnmanagedResult unmanaged_year(const NormalizedYear& year, const BevFleetSpec& spec, double base,
                               double capacity);

/// CSV with header `timestamp,demand_gw,charge_gw,consumption_gw,soc_gwh`.
void write_schedule_csv(std::ostream& os, const WeekSeries& week, const ChargeSchedule& schedule,
                        std::span<const double> consumption, const SocTrajectory& soc);

}  // namespace gridv2g
