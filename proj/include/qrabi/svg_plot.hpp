#pragma once

// Static SVG line plots: one polyline per series, linear axes with ticks and
// a legend. Coordinates are printed with fixed precision so equal data give
// equal files.

#include <string>
#include <vector>

namespace qrabi::plot {

struct Series {
  std::string name;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  int width = 800;
  int height = 480;
};

/// Throws std::invalid_argument when a series length differs from x.
std::string svg_line_plot(const std::vector<double>& x, const std::vector<Series>& series, const PlotSpec& spec);

}  // namespace qrabi::plot
