#pragma once

// Trajectory CSV, events JSON and drift JSON, written with shortest
// round-trip number formatting so files can be re-read exactly.

#include <iosfwd>
#include <string>
#include <vector>

#include "poledyn/invariants.hpp"
#include "poledyn/types.hpp"

namespace poledyn::cli {

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

/// Header "t,x1,y1,x2,y2,..." then one row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
/// Inverse of write_trajectory_csv; labels become "1", "2", ...
Trajectory read_trajectory_csv(std::istream& is);

/// [{kind, t, pole, x, y, detail}]
std::string events_json(const std::vector<Event>& events);
std::vector<Event> parse_events_json(const std::string& text);

/// [{quantity, max_abs_drift, max_rel_drift, per_segment: [...]}]
std::string drift_json(const std::vector<ConservedQuantityReport>& reports);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace poledyn::cli
