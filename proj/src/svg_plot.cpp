/*
 Copyright 2026 The lkcert Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "lkcert/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace lkcert {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels, int width, int panel_height) {
  const int ml = 70, mr = 150, mt = 28, mb = 40;
  const int height = std::max(1, static_cast<int>(panels.size())) * panel_height;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const Panel& p = panels[pi];
    const double top = static_cast<double>(pi) * panel_height;
    const double x0 = ml, x1 = width - mr, y0 = top + mt, y1 = top + panel_height - mb;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const Series& s : p.series) {
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
    if (!(xmin <= xmax)) xmin = 0.0, xmax = 1.0;
    if (!(ymin <= ymax)) ymin = 0.0, ymax = 1.0;
    if (xmax - xmin < 1e-300) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-300) {
      ymin -= 0.5;
      ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto sx = [&](double v) { return x0 + (v - xmin) / (xmax - xmin) * (x1 - x0); };
    auto sy = [&](double v) { return y1 - (v - ymin) / (ymax - ymin) * (y1 - y0); };

    os << "<text x=\"" << num(x0) << "\" y=\"" << num(top + 18) << "\" font-size=\"13\">" << escape(p.title)
       << "</text>\n";
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0) << "\" height=\""
       << num(y1 - y0) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double xv = xmin + (xmax - xmin) * t / 4.0;
      const double yv = ymin + (ymax - ymin) * t / 4.0;
      os << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(y1 + 14) << "\" text-anchor=\"middle\">" << tick(xv)
         << "</text>\n";
      os << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
         << "</text>\n";
    }
    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(y1 + 30) << "\" text-anchor=\"middle\">"
       << escape(p.xlabel) << "</text>\n";
    os << "<text x=\"" << num(x0 - 55) << "\" y=\"" << num((y0 + y1) / 2) << "\" transform=\"rotate(-90 "
       << num(x0 - 55) << " " << num((y0 + y1) / 2) << ")\" text-anchor=\"middle\">" << escape(p.ylabel)
       << "</text>\n";
    for (std::size_t si = 0; si < p.series.size(); ++si) {
      const Series& s = p.series[si];
      os << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.3\""
         << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
      bool first = true;
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        os << (first ? "" : " ") << num(sx(s.x[i])) << "," << num(sy(s.y[i]));
        first = false;
      }
      os << "\"/>\n";
      const double ly = y0 + 14.0 * static_cast<double>(si) + 8;
      os << "<line x1=\"" << num(x1 + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(x1 + 30) << "\" y2=\""
         << num(ly) << "\" stroke=\"" << escape(s.color) << "\"" << (s.dashed ? " stroke-dasharray=\"5,3\"" : "")
         << "/>\n";
      os << "<text x=\"" << num(x1 + 34) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lkcert
