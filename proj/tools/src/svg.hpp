#pragma once

// Minimal SVG 1.1 line plots. Rendering is a pure function of the series
// data, so identical CSVs give identical SVGs.

#include <string>
#include <vector>

namespace nanotalbot::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
  bool markers = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
  int width = 760;
  int height = 480;
};

std::string render_svg(const PlotSpec& spec);

}  // namespace nanotalbot::cli
