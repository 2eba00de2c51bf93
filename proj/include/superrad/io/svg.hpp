#pragma once

#include <string>
#include <vector>

namespace superrad::io {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  bool markers = false;
  int width = 720;
  int height = 460;
};

/// Static line chart with axes, ticks and a legend. Nonpositive values are
/// dropped on log axes.
std::string line_chart_svg(const std::vector<Series>& series, const PlotOptions& options);

}  // namespace superrad::io
