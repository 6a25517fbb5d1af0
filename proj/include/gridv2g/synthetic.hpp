#pragma once

#include <iosfwd>

#include "gridv2g/ingest.hpp"

namespace gridv2g {

/// A deterministic 365-day stand-in for a year of 5-minute grid records,
/// starting 2017-01-01T00:00:00Z. It has seasonal and daily demand cycles,
/// weekend dips, a daylight-shaped solar trace and wind from a logistic fleet power
/// curve driven by several incommensurate weather periods. Days 15-21 (the
/// third week) hold a cold, near-windless spell. Used by the test suites and
/// the CLI when no recorded data is supplied.
GridSeries synthetic_year();

/// Writes a series as a CSV feed in MW with header `timestamp,demand,wind,solar`.
void write_grid_csv(std::ostream& os, const GridSeries& series);

}  // namespace gridv2g
