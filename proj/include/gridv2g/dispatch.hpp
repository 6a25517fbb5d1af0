#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gridv2g/ingest.hpp"

namespace gridv2g {

enum class CapMode {
  RealTimeDemand,  // wind is curtailed at the instantaneous grid demand
  Leveled,         // wind is curtailed at a constant weekly level
};

struct DispatchConfig {
  double base_generation = 13.0;  // GWe, constant over the week
  CapMode cap_mode = CapMode::RealTimeDemand;
  std::optional<double> level;  // GWe, required for Leveled

  void validate() const;
  [[nodiscard]] double cap_at(double demand) const {
    return cap_mode == CapMode::Leveled ? *level : demand;
  }
};

/// Installed capacity of the modelled fleet and the capacity the normalized
/// wind trace was produced for.
struct WindFleet {
  double reference_capacity = 20.0;  // GWc
  double capacity = 20.0;            // GWc

  [[nodiscard]] double ratio() const { return capacity / reference_capacity; }
};

struct DispatchSummary {
  double mean_wind_used = 0.0;    // GWe
  double peak_gas_turbine = 0.0;  // GWe
  double mean_gas_turbine = 0.0;  // GWe
  double gt_energy = 0.0;         // GWh
  double curtailed_energy = 0.0;  // GWh
  double min_wind_available = 0.0;
};

struct DispatchResult {
  std::vector<double> wind_available;
  std::vector<double> wind_used;
  std::vector<double> wind_curtailed;
  std::vector<double> gas_turbine;
  DispatchSummary summary;
};

/// Stacks base, then solar, then wind under the cap; wind above the cap is
/// curtailed and any shortfall is met by gas turbines.
///   wind_used = clamp(cap - base - solar, 0, wind_available)
///   gas_turbine = max(0, cap - base - solar - wind_used)
/// Energies are left Riemann sums over 5-minute samples.
DispatchResult dispatch_week(const WeekSeries& week, const WindFleet& fleet,
                             const DispatchConfig& cfg);

/// Scalars only, for sweeps that do not need per-sample series.
DispatchSummary summarize_week(const WeekSeries& week, const WindFleet& fleet,
                               const DispatchConfig& cfg);

struct Hdrm {
  double value = 0.0;  // GWe
};

/// Headroom: average grid demand minus base generation.
inline Hdrm hdrm_of(double mean_demand, double base_generation) {
  return Hdrm{mean_demand - base_generation};
}

/// Half-open range of sample indices within a week.
struct SampleWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct EnergyBalance {
  double deficit = 0.0;  // GWh
  double surplus = 0.0;  // GWh
};

/// Energy shortfall and excess over a window using uncurtailed wind.
EnergyBalance surplus_deficit(const WeekSeries& week, const WindFleet& fleet,
                              const DispatchConfig& cfg, SampleWindow window);

/// Copy of the week with demand replaced by its weekly mean.
WeekSeries flatten_demand(WeekSeries week);

/// CSV with header
/// `timestamp,demand_gw,base_gw,solar_gw,wind_used_gw,wind_curtailed_gw,gas_turbine_gw`.
void write_dispatch_csv(std::ostream& os, const WeekSeries& week, const DispatchConfig& cfg,
                        const DispatchResult& result);

}  // namespace gridv2g
