// Copyright 2026 The RCA Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal static SVG line/scatter charts. Output depends only on the input
// data, so repeated runs produce identical files.

#ifndef RCA_PLOT_SVG_H_
#define RCA_PLOT_SVG_H_

#include <string>
#include <utility>
#include <vector>

namespace rca::plot {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::string color = "#1f77b4";
  bool line = true;
  bool dashed = false;
  bool markers = false;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<Series> series;
};

std::string render_svg(const Chart& chart);

// Axis range padded by 5% on each side; degenerate ranges widen to +-0.5.
std::pair<double, double> padded_range(const std::vector<double>& values);

}  // namespace rca::plot

#endif  // RCA_PLOT_SVG_H_
