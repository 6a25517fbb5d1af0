#include "gridv2g/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "gridv2g/errors.hpp"
#include "gridv2g/format.hpp"

namespace gridv2g {

void ScalingSpec::validate() const {
  if (!(embedded_multiplier > 0.0)) throw ConfigError("embedded_multiplier must be > 0");
  if (!(reference_capacity > 0.0)) throw ConfigError("reference_capacity must be > 0");
  if (!(target_capacity_factor > 0.0 && target_capacity_factor <= 1.0)) {
    throw ConfigError("target_capacity_factor must be in (0, 1]");
  }
  // Zero is allowed so the wind-only cross-check can switch solar off.
  if (!(solar_scale >= 0.0)) throw ConfigError("solar_scale must be >= 0");
}

double NormalizedYear::mean_demand() const {
  double sum = 0.0;
  for (const auto& w : weeks) sum += w.mean_demand();
  return weeks.empty() ? 0.0 : sum / static_cast<double>(weeks.size());
}

double NormalizedYear::mean_wind() const {
  double sum = 0.0;
  for (const auto& w : weeks) sum += mean(w.wind);
  return weeks.empty() ? 0.0 : sum / static_cast<double>(weeks.size());
}

const WeekSeries& NormalizedYear::week(int index) const {
  if (index < 1 || index > static_cast<int>(weeks.size())) {
    throw ConfigError(fmt::format("week {} out of range 1..{}", index, weeks.size()));
  }
  return weeks[static_cast<std::size_t>(index - 1)];
}

NormalizedYear normalize(std::vector<WeekSeries> weeks, const ScalingSpec& spec) {
  spec.validate();
  if (weeks.empty()) throw InputError("no weeks to normalize");

  double metered_sum = 0.0;
  for (const auto& w : weeks) metered_sum += mean(w.wind);
  const double metered_mean = metered_sum / static_cast<double>(weeks.size());
  if (!(metered_mean > 0.0)) throw InputError("annual mean of metered wind is zero");

  const double target = spec.target_capacity_factor * spec.reference_capacity;
  const double k = target / (metered_mean * spec.embedded_multiplier);
  const double factor = spec.embedded_multiplier * k;

  for (auto& w : weeks) {
    for (auto& x : w.wind) x *= factor;
    if (spec.solar_scale != 1.0) {
      for (auto& s : w.solar) s *= spec.solar_scale;
    }
  }
  return NormalizedYear{std::move(weeks), spec.reference_capacity, k, spec};
}

NormalizedYear normalize(const GridSeries& series, const ScalingSpec& spec) {
  return normalize(segment_weeks(series).weeks, spec);
}

NormalizedYear rescale_solar(NormalizedYear year, double factor) {
  if (!(factor >= 0.0)) throw ConfigError("solar factor must be >= 0");
  for (auto& w : year.weeks) {
    for (auto& s : w.solar) s *= factor;
  }
  year.spec.solar_scale *= factor;
  return year;
}

std::vector<double> extrapolate_wind(std::span<const double> wind, double reference_capacity,
                                     double capacity) {
  if (!(capacity > 0.0)) throw ConfigError("wind capacity must be > 0");
  if (!(reference_capacity > 0.0)) throw ConfigError("reference capacity must be > 0");
  std::vector<double> out(wind.begin(), wind.end());
  if (capacity == reference_capacity) return out;
  const double ratio = capacity / reference_capacity;
  for (auto& x : out) x *= ratio;
  return out;
}

std::vector<double> extrapolate_wind(const NormalizedYear& year, double capacity) {
  std::vector<double> out;
  out.reserve(year.weeks.size() * kSamplesPerWeek);
  for (const auto& w : year.weeks) {
    const auto part = extrapolate_wind(w.wind, year.reference_capacity, capacity);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

double WindHistogram::total_percent() const {
  double sum = 0.0;
  for (const auto& b : bins) sum += b.percent;
  return sum;
}

double WindHistogram::mean_of_centres() const {
  double sum = 0.0;
  for (const auto& b : bins) sum += (b.lower + 0.5 * bin_width) * b.percent / 100.0;
  return sum;
}

WindHistogram wind_histogram(std::span<const double> trace, double bin_width, double capacity) {
  if (trace.empty()) throw InputError("cannot build a histogram of an empty trace");
  if (!(bin_width > 0.0)) throw ConfigError("bin width must be > 0");

  std::vector<std::size_t> counts;
  for (const double x : trace) {
    const auto bin = static_cast<std::size_t>(std::max(0.0, std::floor(x / bin_width)));
    if (bin >= counts.size()) counts.resize(bin + 1, 0);
    ++counts[bin];
  }

  WindHistogram hist;
  hist.bin_width = bin_width;
  hist.capacity = capacity;
  hist.bins.reserve(counts.size());
  const auto total = static_cast<double>(trace.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    hist.bins.push_back({static_cast<double>(i) * bin_width,
                         100.0 * static_cast<double>(counts[i]) / total});
  }
  return hist;
}

void write_histogram_csv(std::ostream& os, const WindHistogram& hist) {
  os << "bin_lower_gwe,percent\n";
  for (const auto& b : hist.bins) os << num(b.lower) << ',' << num(b.percent) << '\n';
}

}  // namespace gridv2g
