#pragma once

#include <string>
#include <vector>

namespace tempergap {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Self-contained SVG line plot with axes, ticks and a legend.
std::string svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& opts);

}  // namespace tempergap
