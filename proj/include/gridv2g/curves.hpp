#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gridv2g/bev.hpp"
#include "gridv2g/scaling.hpp"

namespace gridv2g {

/// Real-time-demand capping with base generation = annual mean demand - hdrm.
struct HdrmFamily {
  double hdrm = 20.0;  // GWe
};

/// Leveled capping at weekly mean demand plus the fleet's mean power.
struct BevFamily {
  BevFleetSpec fleet;
  double base_generation = 13.0;  // GWe
};

using CurveFamily = std::variant<HdrmFamily, BevFamily>;

std::string family_label(const CurveFamily& family);

struct CurvePoint {
  double capacity = 0.0;   // GWc
  double mean_wind = 0.0;  // GWe
};

/// Annual mean delivered wind as a function of installed capacity. The origin
/// is implicit: value_at(0) == 0.
struct CharacteristicCurve {
  std::vector<CurvePoint> points;  // strictly increasing capacity
  std::string label;

  /// Piecewise-linear interpolation; held flat beyond the last point.
  [[nodiscard]] double value_at(double capacity) const;
  [[nodiscard]] double max_capacity() const;
  [[nodiscard]] double plateau() const;
  /// Throws SimulationError unless the curve is nondecreasing and concave.
  void check_invariants(double tolerance = 1e-9) const;
};

std::vector<double> default_capacity_grid();

struct CurveRequest {
  std::vector<double> capacities = default_capacity_grid();
  CurveFamily family = HdrmFamily{};
};

struct SweepOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Averages weekly mean wind used over all 52 weeks for each capacity.
CharacteristicCurve annual_curve(const NormalizedYear& year, const CurveRequest& request,
                                 const SweepOptions& options = {});

/// Solar-free approximation from a histogram taken at the reference fleet:
/// sum over bins of p * min(centre * capacity / reference, hdrm).
double curve_from_histogram(const WindHistogram& hist, double capacity, double hdrm);
CharacteristicCurve histogram_curve(const WindHistogram& hist, std::span<const double> capacities,
                                    double hdrm);

/// Smallest capacity whose interpolated value reaches `required`, by
/// bisection down to `resolution` GWc. Throws SimulationError when the
/// target lies above the curve's last point.
double invert_curve(const CharacteristicCurve& curve, double required, double resolution = 0.1);

struct FleetSizing {
  double capacity = 0.0;  // GWc
  CharacteristicCurve curve;  // coarse grid plus refinement points
};

/// Inverts the annual curve, then adds points every `refine_step` GWc inside
/// the bracketing grid interval and inverts again.
FleetSizing size_wind_fleet(const NormalizedYear& year, const CurveFamily& family,
                            double required, std::span<const double> capacities,
                            double refine_step = 2.5, const SweepOptions& options = {});

/// CSV with header `capacity_gwc,mean_wind_gwe,family_label`.
void write_curves_csv(std::ostream& os, std::span<const CharacteristicCurve> curves);

}  // namespace gridv2g
