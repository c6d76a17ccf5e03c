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

#include "rca/plot/svg.h"

#include <algorithm>

#include <fmt/format.h>

namespace rca::plot {
namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 48.0;

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::pair<double, double> padded_range(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 1.0};
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double a = *lo, b = *hi;
  if (b - a <= 0.0) return {a - 0.5, b + 0.5};
  const double pad = 0.05 * (b - a);
  return {a - pad, b + pad};
}

std::string render_svg(const Chart& c) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const double xspan = c.x_max > c.x_min ? c.x_max - c.x_min : 1.0;
  const double yspan = c.y_max > c.y_min ? c.y_max - c.y_min : 1.0;
  auto sx = [&](double x) { return kLeft + (x - c.x_min) / xspan * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - c.y_min) / yspan * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      kWidth, kHeight, kWidth, kHeight);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += fmt::format("<text x=\"{:.1f}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     kWidth / 2, Escape(c.title));
  svg += fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      kLeft, kTop, pw, ph);
  for (int t = 0; t <= 4; ++t) {
    const double fx = c.x_min + xspan * t / 4.0;
    const double fy = c.y_min + yspan * t / 4.0;
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"10\">{:.3g}</text>\n",
        sx(fx), kTop + ph + 14, fx);
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" font-size=\"10\">{:.3g}</text>\n",
        kLeft - 4, sy(fy) + 3, fy);
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
      kLeft + pw / 2, kHeight - 10, Escape(c.x_label));
  svg += fmt::format(
      "<text x=\"14\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"12\" "
      "transform=\"rotate(-90 14 {:.1f})\">{}</text>\n",
      kTop + ph / 2, kTop + ph / 2, Escape(c.y_label));

  double legend_y = kTop + 14;
  for (const auto& s : c.series) {
    if (s.line && s.points.size() > 1) {
      std::string path;
      for (std::size_t k = 0; k < s.points.size(); ++k) {
        path += fmt::format("{}{:.2f},{:.2f}", k == 0 ? "M" : " L", sx(s.points[k].first),
                            sy(s.points[k].second));
      }
      svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{}/>\n",
                         path, s.color, s.dashed ? " stroke-dasharray=\"5,3\"" : "");
    }
    if (s.markers || !s.line || s.points.size() == 1) {
      for (const auto& [x, y] : s.points) {
        svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n",
                           sx(x), sy(y), s.color);
      }
    }
    if (!s.label.empty()) {
      svg += fmt::format(
          "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" font-size=\"10\" fill=\"{}\">{}</text>\n",
          kLeft + pw - 6, legend_y, s.color, Escape(s.label));
      legend_y += 12;
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace rca::plot
