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
#ifndef LKCERT_SVG_PLOT_HPP
#define LKCERT_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace lkcert {

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Panel {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<Series> series;
};

// Standalone SVG with the panels stacked vertically. Output depends only on
// the data, so identical inputs give identical bytes.
std::string render_svg(const std::vector<Panel>& panels, int width = 800, int panel_height = 240);

}  // namespace lkcert

#endif  // LKCERT_SVG_PLOT_HPP
