#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "gridv2g/ingest.hpp"
#include "gridv2g/scaling.hpp"

namespace gridv2g::testing {

inline Timestamp monday_2017_01_16() {
  using namespace std::chrono;
  return Timestamp{sys_days{year{2017} / 1 / 16}};
}

inline WeekSeries constant_week(double demand, double wind, double solar, int index = 1) {
  WeekSeries w;
  w.index = index;
  w.start = monday_2017_01_16();
  w.demand.assign(kSamplesPerWeek, demand);
  w.wind.assign(kSamplesPerWeek, wind);
  w.solar.assign(kSamplesPerWeek, solar);
  return w;
}

/// Week whose samples come from f(i) -> {demand, wind, solar}.
struct Sample {
  double demand, wind, solar;
};

inline WeekSeries week_from(const std::function<Sample(std::size_t)>& f, int index = 1) {
  WeekSeries w;
  w.index = index;
  w.start = monday_2017_01_16();
  for (std::size_t i = 0; i < kSamplesPerWeek; ++i) {
    const auto s = f(i);
    w.demand.push_back(s.demand);
    w.wind.push_back(s.wind);
    w.solar.push_back(s.solar);
  }
  return w;
}

/// Random but reproducible week with a daily demand cycle.
inline WeekSeries random_week(std::mt19937_64& rng, int index = 1) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double mean_demand = 25.0 + 15.0 * u(rng);
  const double swing = 3.0 + 6.0 * u(rng);
  const double wind_level = 2.0 + 10.0 * u(rng);
  const double solar_peak = 6.0 * u(rng);
  return week_from(
      [&](std::size_t i) {
        const double hour = static_cast<double>(i % kSamplesPerDay) / 12.0;
        const double d = mean_demand - swing * std::cos(2.0 * M_PI * (hour - 4.0) / 24.0) +
                         0.5 * (u(rng) - 0.5);
        const double w = std::max(0.0, wind_level * (1.0 + 0.8 * std::sin(i / 300.0)) +
                                           (u(rng) - 0.5));
        const double s = (hour > 7 && hour < 19)
                             ? solar_peak * std::sin(M_PI * (hour - 7.0) / 12.0)
                             : 0.0;
        return Sample{d, w, s};
      },
      index);
}

/// A 52-week normalized year built directly from weeks (no rescaling).
inline NormalizedYear year_of(std::vector<WeekSeries> weeks, double reference = 20.0) {
  NormalizedYear y;
  for (std::size_t i = 0; i < weeks.size(); ++i) weeks[i].index = static_cast<int>(i + 1);
  y.weeks = std::move(weeks);
  y.reference_capacity = reference;
  y.spec.reference_capacity = reference;
  return y;
}

inline bool close(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace gridv2g::testing
