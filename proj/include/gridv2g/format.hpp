#pragma once

#include <string>

#include <fmt/format.h>

namespace gridv2g {

/// Shortest round-trip decimal form; CSV output uses this everywhere so files
/// carry full precision and are byte-stable across runs.
inline std::string num(double x) {
  if (x == 0.0) return "0";  // folds -0
  return fmt::format("{}", x);
}

}  // namespace gridv2g
