#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridv2g/bev.hpp"
#include "gridv2g/ingest.hpp"
#include "gridv2g/report.hpp"
#include "gridv2g/scaling.hpp"

namespace gridv2g::cli {

inline constexpr const char* kVersion = "0.3.0";

/// Everything a run needs. Unset optionals take per-command defaults.
struct RunConfig {
  std::optional<std::filesystem::path> input;
  bool synthetic = false;
  ColumnMap columns;
  ScalingSpec scaling;
  bool solar_scale_set = false;
  BevFleetSpec fleet;
  std::optional<double> base_generation;
  std::optional<std::vector<double>> capacities;
  std::vector<double> hdrm_values{20.0, 25.0, 30.0, 35.0};
  std::optional<std::vector<double>> fleet_sizes;
  std::optional<std::vector<int>> weeks;
  std::filesystem::path out_dir = "out";
  ScenarioConstants constants;
  unsigned threads = 0;
  double refine_step = 2.5;
};

using KeyValues = std::map<std::string, std::string>;

/// `key = value` lines; `#` starts a comment. Throws ConfigError on malformed
/// lines and InputError if the file cannot be read.
KeyValues read_config_file(const std::filesystem::path& path);
KeyValues parse_config(std::istream& in);

/// Throws ConfigError for unknown keys or unparseable values.
RunConfig build_config(const KeyValues& values);

/// Entry point; returns the process exit code
/// (0 ok, 1 simulation error, 2 input error, 3 config error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gridv2g::cli
