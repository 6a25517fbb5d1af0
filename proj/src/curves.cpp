#include "gridv2g/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "gridv2g/dispatch.hpp"
#include "gridv2g/errors.hpp"
#include "gridv2g/format.hpp"
#include "gridv2g/parallel.hpp"

namespace gridv2g {

std::string family_label(const CurveFamily& family) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, HdrmFamily>) {
          return fmt::format("hdrm_{}", num(f.hdrm));
        } else {
          return fmt::format("bev_{}M", num(f.fleet.fleet_millions));
        }
      },
      family);
}

double CharacteristicCurve::value_at(double capacity) const {
  if (points.empty() || capacity <= 0.0) return 0.0;
  double c0 = 0.0, v0 = 0.0;
  for (const auto& p : points) {
    if (capacity <= p.capacity) {
      const double t = (capacity - c0) / (p.capacity - c0);
      return v0 + t * (p.mean_wind - v0);
    }
    c0 = p.capacity;
    v0 = p.mean_wind;
  }
  return points.back().mean_wind;
}

double CharacteristicCurve::max_capacity() const {
  return points.empty() ? 0.0 : points.back().capacity;
}

double CharacteristicCurve::plateau() const {
  return points.empty() ? 0.0 : points.back().mean_wind;
}

void CharacteristicCurve::check_invariants(double tolerance) const {
  double c0 = 0.0, v0 = 0.0;
  double prev_slope = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    if (!(p.capacity > c0)) {
      throw SimulationError(fmt::format("curve {}: capacities not strictly increasing at {}",
                                        label, p.capacity));
    }
    const double slope = (p.mean_wind - v0) / (p.capacity - c0);
    const double tol = tolerance * (1.0 + std::abs(slope));
    if (slope < -tol) {
      throw SimulationError(fmt::format("curve {}: decreasing at {} GWc", label, p.capacity));
    }
    if (slope > prev_slope + tol) {
      throw SimulationError(fmt::format("curve {}: marginal gain rises at {} GWc", label,
                                        p.capacity));
    }
    prev_slope = slope;
    c0 = p.capacity;
    v0 = p.mean_wind;
  }
}

std::vector<double> default_capacity_grid() { return {20, 30, 40, 50, 60, 70, 80}; }

namespace {

void check_capacities(std::span<const double> capacities) {
  if (capacities.empty()) throw ConfigError("capacity grid is empty");
  double prev = 0.0;
  for (const double c : capacities) {
    if (!(c > prev)) throw ConfigError("capacities must be positive and strictly increasing");
    prev = c;
  }
}

// One dispatch configuration per week for the requested family.
std::vector<DispatchConfig> weekly_configs(const NormalizedYear& year, const CurveFamily& family) {
  std::vector<DispatchConfig> cfgs(year.weeks.size());
  if (const auto* h = std::get_if<HdrmFamily>(&family)) {
    const double base = year.mean_demand() - h->hdrm;
    for (auto& c : cfgs) c = DispatchConfig{base, CapMode::RealTimeDemand, std::nullopt};
  } else {
    const auto& b = std::get<BevFamily>(family);
    const double bev_power = fleet_aggregates(b.fleet).mean_power;
    for (std::size_t w = 0; w < cfgs.size(); ++w) {
      cfgs[w] = DispatchConfig{b.base_generation, CapMode::Leveled,
                               year.weeks[w].mean_demand() + bev_power};
    }
  }
  return cfgs;
}

}  // namespace

CharacteristicCurve annual_curve(const NormalizedYear& year, const CurveRequest& request,
                                 const SweepOptions& options) {
  check_capacities(request.capacities);
  if (year.weeks.empty()) throw InputError("normalized year has no weeks");
  const auto cfgs = weekly_configs(year, request.family);

  CharacteristicCurve curve;
  curve.label = family_label(request.family);
  curve.points.resize(request.capacities.size());
  parallel_for(request.capacities.size(), options.threads, [&](std::size_t k) {
    const WindFleet fleet{year.reference_capacity, request.capacities[k]};
    double sum = 0.0;
    for (std::size_t w = 0; w < year.weeks.size(); ++w) {
      sum += summarize_week(year.weeks[w], fleet, cfgs[w]).mean_wind_used;
    }
    curve.points[k] = {request.capacities[k], sum / static_cast<double>(year.weeks.size())};
  });
  curve.check_invariants();
  return curve;
}

double curve_from_histogram(const WindHistogram& hist, double capacity, double hdrm) {
  if (!(hist.capacity > 0.0)) {
    throw ConfigError("histogram must record the reference capacity it was built at");
  }
  const double ratio = capacity / hist.capacity;
  double sum = 0.0;
  for (const auto& b : hist.bins) {
    const double centre = b.lower + 0.5 * hist.bin_width;
    sum += b.percent / 100.0 * std::min(centre * ratio, hdrm);
  }
  return sum;
}

CharacteristicCurve histogram_curve(const WindHistogram& hist, std::span<const double> capacities,
                                    double hdrm) {
  check_capacities(capacities);
  CharacteristicCurve curve;
  curve.label = fmt::format("histogram_hdrm_{}", num(hdrm));
  for (const double c : capacities) curve.points.push_back({c, curve_from_histogram(hist, c, hdrm)});
  return curve;
}

double invert_curve(const CharacteristicCurve& curve, double required, double resolution) {
  if (curve.points.empty()) throw ConfigError("cannot invert an empty curve");
  if (!(resolution > 0.0)) throw ConfigError("inversion resolution must be > 0");
  if (required <= 0.0) return 0.0;
  if (required > curve.plateau()) {
    throw SimulationError(fmt::format("target unreachable; curve saturates at {:.3f} GWe",
                                      curve.plateau()));
  }
  double lo = 0.0;
  double hi = curve.max_capacity();
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (curve.value_at(mid) >= required) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

FleetSizing size_wind_fleet(const NormalizedYear& year, const CurveFamily& family,
                            double required, std::span<const double> capacities,
                            double refine_step, const SweepOptions& options) {
  if (!(refine_step > 0.0)) throw ConfigError("refinement step must be > 0");
  CurveRequest request{std::vector<double>(capacities.begin(), capacities.end()), family};
  FleetSizing out;
  out.curve = annual_curve(year, request, options);
  const double coarse = invert_curve(out.curve, required);

  // Grid interval that brackets the coarse answer.
  double lo = 0.0, hi = out.curve.max_capacity();
  for (const auto& p : out.curve.points) {
    if (p.capacity < coarse) lo = p.capacity;
    if (p.capacity >= coarse) {
      hi = p.capacity;
      break;
    }
  }
  std::vector<double> extra;
  for (double c = lo + refine_step; c < hi - 1e-9; c += refine_step) {
    const bool on_grid = std::any_of(out.curve.points.begin(), out.curve.points.end(),
                                     [c](const CurvePoint& p) { return std::abs(p.capacity - c) < 1e-9; });
    if (c > 0.0 && !on_grid) extra.push_back(c);
  }
  if (!extra.empty()) {
    const auto fine = annual_curve(year, CurveRequest{extra, family}, options);
    out.curve.points.insert(out.curve.points.end(), fine.points.begin(), fine.points.end());
    std::sort(out.curve.points.begin(), out.curve.points.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.capacity < b.capacity; });
    out.curve.check_invariants();
  }
  out.capacity = invert_curve(out.curve, required);
  return out;
}

void write_curves_csv(std::ostream& os, std::span<const CharacteristicCurve> curves) {
  os << "capacity_gwc,mean_wind_gwe,family_label\n";
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      os << num(p.capacity) << ',' << num(p.mean_wind) << ',' << curve.label << '\n';
    }
  }
}

}  // namespace gridv2g
