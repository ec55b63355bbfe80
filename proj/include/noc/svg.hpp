#pragma once

#include <string>
#include <vector>

namespace noc {

struct PlotSeries {
  std::string label;
  std::string color;  // any SVG color string
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal polyline plot: frame, ticks, legend, one polyline per series.
// Series longer than ~2000 points are decimated for file size.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, int width = 960,
                    int height = 440);

}  // namespace noc
