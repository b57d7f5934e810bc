#pragma once

#include <string>
#include <vector>

namespace nonbloch {

// Minimal standalone SVG line/scatter plot.
struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
  bool scatter = false;
};

struct SvgPlot {
  std::string title, xlabel, ylabel;
  std::vector<SvgSeries> series;

  std::string render(int width = 640, int height = 420) const;
};

}  // namespace nonbloch
