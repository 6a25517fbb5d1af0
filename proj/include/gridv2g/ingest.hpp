#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridv2g {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::int64_t kCadenceSeconds = 300;
inline constexpr std::size_t kSamplesPerDay = 288;
inline constexpr std::size_t kSamplesPerWeek = 7 * kSamplesPerDay;  // 2016
inline constexpr std::size_t kWeeksPerYear = 52;
inline constexpr std::size_t kSamplesPerYear = kWeeksPerYear * kSamplesPerWeek;
/// Duration of one sample in hours; energies are GW x h = GWh.
inline constexpr double kSampleHours = 1.0 / 12.0;
inline constexpr double kHoursPerWeek = 168.0;

/// One row of a raw grid feed. Power values are in MW as published.
struct RawRecord {
  Timestamp timestamp{};
  double demand_mw = 0.0;
  double wind_mw = 0.0;
  double solar_mw = 0.0;
  std::size_t line = 0;  // 1-based source line, 0 if synthesized
};

/// Header names of the columns to read; other columns are ignored.
struct ColumnMap {
  std::string timestamp = "timestamp";
  std::string demand = "demand";
  std::string wind = "wind";
  std::string solar = "solar";
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct ParseOptions {
  /// Parsing fails outright when more than this fraction of data rows is bad.
  double max_error_fraction = 0.01;
};

struct ParseResult {
  std::vector<RawRecord> records;  // file order
  std::vector<RowError> errors;
  std::size_t data_rows = 0;  // non-blank rows after the header
};

/// Accepts `YYYY-MM-DD[T| ]HH:MM[:SS[.fff]][Z|+HH:MM|-HH:MM]`; the result is
/// UTC with fractional seconds truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

ParseResult parse_csv(std::istream& in, const ColumnMap& columns = {},
                      const ParseOptions& options = {});
/// Throws InputError if the file is missing, a mapped column is absent, or
/// too many rows are malformed.
ParseResult parse_csv(const std::filesystem::path& path,
                      const ColumnMap& columns = {},
                      const ParseOptions& options = {});

struct Provenance {
  std::string source;
  std::size_t input_records = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t timestamps_snapped = 0;
  std::size_t samples_interpolated = 0;
  std::vector<std::string> repairs;

  void write(std::ostream& os) const;
};

/// Contiguous 5-minute samples in GW.
struct GridSeries {
  Timestamp start{};
  std::vector<double> demand;
  std::vector<double> wind;   // metered wind
  std::vector<double> solar;
  Provenance provenance;

  [[nodiscard]] std::size_t size() const { return demand.size(); }
  [[nodiscard]] Timestamp time_at(std::size_t i) const {
    return start + std::chrono::seconds(static_cast<std::int64_t>(i) * kCadenceSeconds);
  }
};

struct CanonicalizeOptions {
  /// Timestamps within this many seconds of the 300 s grid anchored at the
  /// earliest record are snapped onto it. Feeds such as Gridwatch jitter by
  /// a few seconds.
  std::int64_t snap_tolerance_s = 60;
  /// Longest run of missing samples that is filled by interpolation.
  std::size_t max_gap_samples = 12;
};

/// Sorts, de-duplicates (first occurrence wins), snaps, gap-fills and converts
/// MW to GW. Throws InputError on gaps longer than the limit or timestamps off
/// the cadence grid.
GridSeries canonicalize(std::vector<RawRecord> records,
                        const CanonicalizeOptions& options = {});

/// Inverse of the unit conversion in canonicalize; used for round-tripping.
std::vector<RawRecord> to_records(const GridSeries& series);

/// One contiguous block of 2016 samples.
struct WeekSeries {
  int index = 0;  // 1-based
  Timestamp start{};
  std::vector<double> demand;
  std::vector<double> wind;
  std::vector<double> solar;

  [[nodiscard]] std::size_t size() const { return demand.size(); }
  [[nodiscard]] Timestamp time_at(std::size_t i) const {
    return start + std::chrono::seconds(static_cast<std::int64_t>(i) * kCadenceSeconds);
  }
  [[nodiscard]] double mean_demand() const;
};

struct Segmentation {
  std::vector<WeekSeries> weeks;
  std::size_t discarded = 0;
};

/// Splits the first 52 x 2016 samples into weeks; the remainder is dropped.
Segmentation segment_weeks(const GridSeries& series);

double mean(std::span<const double> values);

}  // namespace gridv2g
