#pragma once

// SVG plots: trajectories over a shaded seabed with its discontinuities,
// and simple line charts for scans.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "poledyn/seabed.hpp"
#include "poledyn/types.hpp"

namespace poledyn::cli {

struct Polyline {
  std::vector<Complex> points;
  std::string stroke = "#1f3b73";
  double width = 1.2;
  bool dashed = false;
};

struct PlanePlot {
  std::string title;
  const Seabed* seabed = nullptr;
  std::vector<Polyline> lines;
  std::vector<Complex> markers;
  /// xmin, xmax, ymin, ymax; fitted to the data when empty
  std::optional<std::array<double, 4>> view;
  int shade_cells = 96;
  double width_px = 720.0;
};

/// Two strokes per pair: even poles solid, odd poles dashed in a lighter tone.
std::vector<Polyline> trajectory_lines(const Trajectory& tr, std::size_t colour_index);

/// Equal horizontal and vertical scales.
std::string render_plane_svg(const PlanePlot& plot);

struct Series {
  std::string name;
  std::vector<std::array<double, 2>> points;
  std::string stroke = "#1f3b73";
};

std::string render_curves_svg(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series);

}  // namespace poledyn::cli
