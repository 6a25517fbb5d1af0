#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "gridv2g/ingest.hpp"

namespace gridv2g {

/// How metered wind and solar are turned into the modelled traces.
struct ScalingSpec {
  /// Metered wind is about 2/3 of the total; the rest is embedded generation.
  double embedded_multiplier = 1.5;
  double reference_capacity = 20.0;  // GWc
  double target_capacity_factor = 0.30;
  /// 1.0 for single-week figures, 2.0 for annual curves.
  double solar_scale = 1.0;

  void validate() const;
};

/// 52 weeks of normalized wind (at reference_capacity) and scaled solar.
struct NormalizedYear {
  std::vector<WeekSeries> weeks;
  double reference_capacity = 20.0;
  /// Capacity-factor correction applied on top of the embedded multiplier.
  double cf_factor = 1.0;
  ScalingSpec spec;

  [[nodiscard]] double mean_demand() const;
  [[nodiscard]] double mean_wind() const;
  [[nodiscard]] const WeekSeries& week(int index) const;
};

/// wind = metered x embedded_multiplier x k, with one k for the whole year
/// chosen so the annual mean equals target_capacity_factor x reference_capacity.
/// Throws InputError if metered wind averages zero.
NormalizedYear normalize(std::vector<WeekSeries> weeks, const ScalingSpec& spec);
NormalizedYear normalize(const GridSeries& series, const ScalingSpec& spec);

/// Same year with solar rescaled by `factor` relative to the current trace.
NormalizedYear rescale_solar(NormalizedYear year, double factor);

/// Linear extrapolation of a wind trace from `reference_capacity` to `capacity`.
std::vector<double> extrapolate_wind(std::span<const double> wind, double reference_capacity,
                                     double capacity);
/// The full 52-week trace at `capacity`, weeks concatenated.
std::vector<double> extrapolate_wind(const NormalizedYear& year, double capacity);

struct HistogramBin {
  double lower = 0.0;    // GWe
  double percent = 0.0;  // of samples
};

struct WindHistogram {
  double bin_width = 1.0;
  double capacity = 0.0;  // fleet the trace belongs to, GWc
  std::vector<HistogramBin> bins;

  [[nodiscard]] double total_percent() const;
  /// Probability-weighted mean of bin centres.
  [[nodiscard]] double mean_of_centres() const;
};

/// Sample x falls into bin floor(x / bin_width); bins run from 0 up to the
/// highest occupied one, empty bins included.
WindHistogram wind_histogram(std::span<const double> trace, double bin_width = 1.0,
                             double capacity = 0.0);

/// CSV with header `bin_lower_gwe,percent`.
void write_histogram_csv(std::ostream& os, const WindHistogram& hist);

}  // namespace gridv2g
