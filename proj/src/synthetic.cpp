#include "gridv2g/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>

#include "gridv2g/format.hpp"

namespace gridv2g {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stateless hash of the sample index mapped to [-1, 1].
double jitter(std::uint64_t i) {
  std::uint64_t z = i + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) / static_cast<double>(1ull << 52) - 1.0;
}

// Fraction of rated output of a geographically spread fleet for a
// representative wind speed in m/s; zero at calm.
double fleet_power_curve(double v) {
  constexpr double mid = 7.5, width = 2.2;
  const double calm = 1.0 / (1.0 + std::exp(mid / width));
  return std::max(0.0, 1.0 / (1.0 + std::exp(-(v - mid) / width)) - calm);
}

bool in_lull(double day) { return day >= 14.0 && day < 21.0; }

}  // namespace

GridSeries synthetic_year() {
  constexpr std::size_t n = 365 * kSamplesPerDay;
  // Weather systems: period in days, amplitude in m/s, phase.
  constexpr std::array<std::array<double, 3>, 6> weather{{
      {0.83, 0.54, 0.3},
      {2.3, 1.53, 1.1},
      {3.7, 1.71, 2.9},
      {6.1, 1.44, 0.7},
      {11.3, 1.17, 4.2},
      {27.0, 0.81, 5.5},
  }};

  GridSeries s;
  s.start = Timestamp{std::chrono::sys_days{std::chrono::year{2017} / 1 / 1}};
  s.provenance.source = "synthetic";
  s.provenance.input_records = n;
  s.demand.resize(n);
  s.wind.resize(n);
  s.solar.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double day = static_cast<double>(i) / static_cast<double>(kSamplesPerDay);
    const double hour = 24.0 * (day - std::floor(day));
    const auto weekday = static_cast<int>(std::floor(day)) % 7;  // 0 = Sunday
    const double winter = 0.5 + 0.5 * std::cos(kTwoPi * (day - 15.0) / 365.0);

    double demand = 27.5 + 11.0 * winter;
    demand += -4.5 * std::cos(kTwoPi * (hour - 4.0) / 24.0);
    demand += 2.0 * std::exp(-(hour - 18.0) * (hour - 18.0) / 3.0) * winter;
    if (weekday == 0 || weekday == 6) demand -= 3.5;
    if (in_lull(day)) demand += 4.0;
    demand += 0.4 * jitter(i);

    double speed = 6.2 + 2.0 * winter;
    for (const auto& [period, amplitude, phase] : weather) {
      speed += amplitude * std::sin(kTwoPi * day / period + phase);
    }
    speed += 0.2 * jitter(i + 7919);
    if (in_lull(day)) speed *= 0.35;
    const double wind = 12.0 * fleet_power_curve(speed);

    const double summer = 1.0 - winter;
    const double daylight = 8.0 + 8.5 * summer;
    const double sunrise = 12.0 - daylight / 2.0;
    double solar = 0.0;
    if (hour > sunrise && hour < sunrise + daylight) {
      const double cloud = 0.65 + 0.35 * std::sin(kTwoPi * day / 4.3 + 0.8);
      solar = (1.2 + 7.3 * summer) * cloud * std::sin(std::numbers::pi * (hour - sunrise) / daylight);
    }

    s.demand[i] = std::max(demand, 1.0);
    s.wind[i] = std::max(wind, 0.0);
    s.solar[i] = std::max(solar, 0.0);
  }
  return s;
}

void write_grid_csv(std::ostream& os, const GridSeries& series) {
  os << "timestamp,demand,wind,solar\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    os << format_timestamp(series.time_at(i)) << ',' << num(series.demand[i] * 1000.0) << ','
       << num(series.wind[i] * 1000.0) << ',' << num(series.solar[i] * 1000.0) << '\n';
  }
}

}  // namespace gridv2g
