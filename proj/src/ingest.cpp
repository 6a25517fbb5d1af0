#include "gridv2g/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

#include "gridv2g/errors.hpp"

namespace gridv2g {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename Int>
bool read_int(std::string_view& s, std::size_t digits, Int& value) {
  if (s.size() < digits) return false;
  const auto* end = s.data() + digits;
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return false;
  s.remove_prefix(digits);
  return true;
}

bool expect(std::string_view& s, char c) {
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  auto s = trim(text);
  int y = 0;
  unsigned mo = 0, d = 0;
  int hh = 0, mm = 0, ss = 0;
  if (!read_int(s, 4, y) || !expect(s, '-') || !read_int(s, 2, mo) ||
      !expect(s, '-') || !read_int(s, 2, d)) {
    return std::nullopt;
  }
  if (s.empty() || (s.front() != 'T' && s.front() != ' ')) return std::nullopt;
  s.remove_prefix(1);
  if (!read_int(s, 2, hh) || !expect(s, ':') || !read_int(s, 2, mm)) return std::nullopt;
  if (!s.empty() && s.front() == ':') {
    s.remove_prefix(1);
    if (!read_int(s, 2, ss)) return std::nullopt;
    if (!s.empty() && s.front() == '.') {
      s.remove_prefix(1);
      const auto n = s.find_first_not_of("0123456789");
      if (n == 0) return std::nullopt;
      s.remove_prefix(n == std::string_view::npos ? s.size() : n);
    }
  }
  int offset_s = 0;
  if (!s.empty()) {
    if (s == "Z") {
      s.remove_prefix(1);
    } else if (s.front() == '+' || s.front() == '-') {
      const int sign = s.front() == '+' ? 1 : -1;
      s.remove_prefix(1);
      int oh = 0, om = 0;
      if (!read_int(s, 2, oh)) return std::nullopt;
      if (!s.empty() && s.front() == ':') s.remove_prefix(1);
      if (!read_int(s, 2, om)) return std::nullopt;
      offset_s = sign * (oh * 3600 + om * 60);
    }
  }
  if (!s.empty()) return std::nullopt;
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;

  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) return std::nullopt;
  return sys_seconds{sys_days{ymd}} + hours{hh} + minutes{mm} + seconds{ss} -
         seconds{offset_s};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z",
                     static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()), hms.hours().count(),
                     hms.minutes().count(), hms.seconds().count());
}

ParseResult parse_csv(std::istream& in, const ColumnMap& columns,
                      const ParseOptions& options) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string_view> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!trim(line).empty()) break;
  }
  const std::string header_line = line;
  header = split_fields(header_line);
  if (header.empty() || (header.size() == 1 && header[0].empty())) {
    throw InputError("CSV input has no header row");
  }

  auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw InputError(fmt::format("CSV header is missing column '{}'", name));
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t i_time = column_index(columns.timestamp);
  const std::size_t i_demand = column_index(columns.demand);
  const std::size_t i_wind = column_index(columns.wind);
  const std::size_t i_solar = column_index(columns.solar);
  const std::size_t needed = std::max({i_time, i_demand, i_wind, i_solar}) + 1;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++result.data_rows;

    const auto fields = split_fields(line);
    if (fields.size() < needed) {
      result.errors.push_back({line_no, fmt::format("expected at least {} fields, found {}",
                                                    needed, fields.size())});
      continue;
    }
    const auto ts = parse_timestamp(fields[i_time]);
    if (!ts) {
      result.errors.push_back(
          {line_no, fmt::format("unparseable timestamp '{}'", fields[i_time])});
      continue;
    }
    const auto demand = parse_number(fields[i_demand]);
    const auto wind = parse_number(fields[i_wind]);
    const auto solar = parse_number(fields[i_solar]);
    if (!demand || !wind || !solar || !std::isfinite(*demand) || !std::isfinite(*wind) ||
        !std::isfinite(*solar)) {
      result.errors.push_back({line_no, "unparseable or non-finite value"});
      continue;
    }
    if (*demand <= 0.0) {
      result.errors.push_back({line_no, fmt::format("demand must be > 0, got {}", *demand)});
      continue;
    }
    if (*wind < 0.0 || *solar < 0.0) {
      result.errors.push_back({line_no, "wind and solar must be >= 0"});
      continue;
    }
    result.records.push_back({*ts, *demand, *wind, *solar, line_no});
  }

  const auto limit = options.max_error_fraction * static_cast<double>(result.data_rows);
  if (static_cast<double>(result.errors.size()) > limit) {
    const auto& first = result.errors.front();
    throw InputError(fmt::format("{} of {} rows malformed (limit {:.1f}%); first at line {}: {}",
                                 result.errors.size(), result.data_rows,
                                 100.0 * options.max_error_fraction, first.line,
                                 first.message));
  }
  return result;
}

ParseResult parse_csv(const std::filesystem::path& path, const ColumnMap& columns,
                      const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open input file '{}'", path.string()));
  return parse_csv(in, columns, options);
}

void Provenance::write(std::ostream& os) const {
  os << "source: " << (source.empty() ? "<memory>" : source) << '\n'
     << "input records: " << input_records << '\n'
     << "duplicates dropped: " << duplicates_dropped << '\n'
     << "timestamps snapped: " << timestamps_snapped << '\n'
     << "samples interpolated: " << samples_interpolated << '\n';
  for (const auto& r : repairs) os << "repair: " << r << '\n';
}

GridSeries canonicalize(std::vector<RawRecord> records, const CanonicalizeOptions& options) {
  if (records.empty()) throw InputError("no records to canonicalize");

  for (const auto& r : records) {
    if (!std::isfinite(r.demand_mw) || !std::isfinite(r.wind_mw) ||
        !std::isfinite(r.solar_mw) || r.demand_mw <= 0.0 || r.wind_mw < 0.0 ||
        r.solar_mw < 0.0) {
      throw InputError(fmt::format("invalid record at {}", format_timestamp(r.timestamp)));
    }
  }

  GridSeries out;
  out.provenance.input_records = records.size();

  std::stable_sort(records.begin(), records.end(),
                   [](const RawRecord& a, const RawRecord& b) { return a.timestamp < b.timestamp; });

  const Timestamp anchor = records.front().timestamp;
  for (auto& r : records) {
    const auto offset = (r.timestamp - anchor).count();
    const auto rem = offset % kCadenceSeconds;
    const auto shift = rem <= kCadenceSeconds / 2 ? -rem : kCadenceSeconds - rem;
    if (shift == 0) continue;
    if (std::abs(shift) > options.snap_tolerance_s) {
      throw InputError(fmt::format("timestamp {} is {} s off the 300 s cadence",
                                   format_timestamp(r.timestamp), -shift));
    }
    r.timestamp += std::chrono::seconds(shift);
    ++out.provenance.timestamps_snapped;
  }
  if (out.provenance.timestamps_snapped > 0) {
    out.provenance.repairs.push_back(fmt::format("snapped {} timestamps onto the 300 s grid",
                                                 out.provenance.timestamps_snapped));
  }

  std::vector<RawRecord> unique;
  unique.reserve(records.size());
  for (const auto& r : records) {
    if (!unique.empty() && unique.back().timestamp == r.timestamp) {
      ++out.provenance.duplicates_dropped;
      out.provenance.repairs.push_back(
          fmt::format("dropped duplicate at {} (line {})", format_timestamp(r.timestamp), r.line));
      continue;
    }
    unique.push_back(r);
  }

  out.start = unique.front().timestamp;
  const auto n_total = static_cast<std::size_t>(
      (unique.back().timestamp - out.start).count() / kCadenceSeconds + 1);
  out.demand.reserve(n_total);
  out.wind.reserve(n_total);
  out.solar.reserve(n_total);

  auto push = [&](double d, double w, double s) {
    out.demand.push_back(d);
    out.wind.push_back(w);
    out.solar.push_back(s);
  };

  for (std::size_t i = 0; i < unique.size(); ++i) {
    const auto& cur = unique[i];
    if (i > 0) {
      const auto& prev = unique[i - 1];
      const auto steps =
          static_cast<std::size_t>((cur.timestamp - prev.timestamp).count() / kCadenceSeconds);
      const auto missing = steps - 1;
      if (missing > options.max_gap_samples) {
        throw InputError(fmt::format("gap exceeds 1 hour: {} samples missing between {} and {}",
                                     missing, format_timestamp(prev.timestamp),
                                     format_timestamp(cur.timestamp)));
      }
      if (missing > 0) {
        const double d0 = prev.demand_mw / 1000.0, d1 = cur.demand_mw / 1000.0;
        const double w0 = prev.wind_mw / 1000.0, w1 = cur.wind_mw / 1000.0;
        const double s0 = prev.solar_mw / 1000.0, s1 = cur.solar_mw / 1000.0;
        for (std::size_t k = 1; k <= missing; ++k) {
          const double f = static_cast<double>(k) / static_cast<double>(steps);
          push(d0 + f * (d1 - d0), w0 + f * (w1 - w0), s0 + f * (s1 - s0));
        }
        out.provenance.samples_interpolated += missing;
        out.provenance.repairs.push_back(fmt::format("interpolated {} samples after {}", missing,
                                                     format_timestamp(prev.timestamp)));
      }
    }
    push(cur.demand_mw / 1000.0, cur.wind_mw / 1000.0, cur.solar_mw / 1000.0);
  }

  if (out.size() != n_total) {
    throw InputError("cadence is not 300 s after repair");
  }
  return out;
}

std::vector<RawRecord> to_records(const GridSeries& series) {
  std::vector<RawRecord> out;
  out.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    out.push_back({series.time_at(i), series.demand[i] * 1000.0, series.wind[i] * 1000.0,
                   series.solar[i] * 1000.0, 0});
  }
  return out;
}

double WeekSeries::mean_demand() const { return mean(demand); }

Segmentation segment_weeks(const GridSeries& series) {
  if (series.size() < kSamplesPerYear) {
    throw InputError(fmt::format("series has {} samples; 52 weeks need {}", series.size(),
                                 kSamplesPerYear));
  }
  Segmentation out;
  out.weeks.reserve(kWeeksPerYear);
  for (std::size_t w = 0; w < kWeeksPerYear; ++w) {
    const auto first = static_cast<std::ptrdiff_t>(w * kSamplesPerWeek);
    const auto last = first + static_cast<std::ptrdiff_t>(kSamplesPerWeek);
    WeekSeries week;
    week.index = static_cast<int>(w + 1);
    week.start = series.time_at(w * kSamplesPerWeek);
    week.demand.assign(series.demand.begin() + first, series.demand.begin() + last);
    week.wind.assign(series.wind.begin() + first, series.wind.begin() + last);
    week.solar.assign(series.solar.begin() + first, series.solar.begin() + last);
    out.weeks.push_back(std::move(week));
  }
  out.discarded = series.size() - kSamplesPerYear;
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace gridv2g
