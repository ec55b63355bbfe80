#include "noc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "noc/errors.hpp"

namespace noc {

namespace {

constexpr int kMaxPointsPerSeries = 2000;

struct Bounds {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, int width,
                    int height) {
  Bounds b;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size())
      throw ConfigError("svg series '" + s.label + "' has x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      b.x_min = std::min(b.x_min, s.x[i]);
      b.x_max = std::max(b.x_max, s.x[i]);
      b.y_min = std::min(b.y_min, s.y[i]);
      b.y_max = std::max(b.y_max, s.y[i]);
    }
  }
  if (!(b.x_min <= b.x_max)) {  // nothing finite to draw
    b = {0.0, 1.0, 0.0, 1.0};
  }
  if (b.x_max == b.x_min) b.x_max = b.x_min + 1.0;
  if (b.y_max == b.y_min) {
    b.y_min -= 0.5;
    b.y_max += 0.5;
  }
  const double pad_y = 0.05 * (b.y_max - b.y_min);
  b.y_min -= pad_y;
  b.y_max += pad_y;

  const double ml = 70, mr = 20, mt = 40, mb = 45;  // margins
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double x) { return ml + (x - b.x_min) / (b.x_max - b.x_min) * pw; };
  auto sy = [&](double y) {
    return mt + ph - (y - b.y_min) / (b.y_max - b.y_min) * ph;
  };

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n"
      << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // ticks
  for (int i = 0; i <= 4; ++i) {
    const double xv = b.x_min + (b.x_max - b.x_min) * i / 4.0;
    const double yv = b.y_min + (b.y_max - b.y_min) * i / 4.0;
    out << "<line x1=\"" << sx(xv) << "\" y1=\"" << mt + ph << "\" x2=\""
        << sx(xv) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << sx(xv) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(xv) << "</text>\n"
        << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << ml
        << "\" y2=\"" << sy(yv) << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(yv) << "</text>\n";
  }

  int legend_y = static_cast<int>(mt) + 14;
  for (const PlotSeries& s : series) {
    const std::size_t stride =
        std::max<std::size_t>(1, s.x.size() / kMaxPointsPerSeries);
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << fmt(sx(s.x[i])) << ',' << fmt(sy(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << legend_y
        << "\" x2=\"" << ml + pw - 130 << "\" y2=\"" << legend_y
        << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << ml + pw - 124 << "\" y=\"" << legend_y + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
        << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
}

}  // namespace noc
