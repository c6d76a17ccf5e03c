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

#include "rca/fitap/report.h"

#include <fmt/format.h>

#include "rca/plot/svg.h"

namespace rca::fitap {

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["thresholds"] = report.thresholds;
  j["ap"] = report.ap;
  j["fitap"] = report.fitap;
  auto& cats = j["categories"] = nlohmann::json::array();
  for (const auto& c : report.categories) {
    cats.push_back({{"category", c.category},
                    {"n_gt", c.n_gt},
                    {"n_det", c.n_det},
                    {"ap", c.ap},
                    {"fitap", c.fitap}});
  }
  return j;
}

std::string thresholds_csv(const EvalReport& report) {
  std::string out = "threshold,ap\n";
  for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
    out += fmt::format("{:.2f},{}\n", report.thresholds[t], report.ap[t]);
  }
  out += fmt::format("fitap,{}\n", report.fitap);
  return out;
}

std::string categories_csv(const EvalReport& report) {
  std::string out = "category,threshold,ap,n_gt,n_det\n";
  for (const auto& c : report.categories) {
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
      out += fmt::format("{},{:.2f},{},{},{}\n", c.category, report.thresholds[t], c.ap[t],
                         c.n_gt, c.n_det);
    }
  }
  return out;
}

std::string pr_curve_csv(const PRCurve& curve) {
  const PRCurve env = envelope(curve);
  std::string out = "rank,recall,precision,envelope_precision\n";
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    out += fmt::format("{},{},{},{}\n", k + 1, curve.points[k].recall,
                       curve.points[k].precision, env.points[k].precision);
  }
  return out;
}

std::string pr_curve_svg(const PRCurve& curve, const std::string& title) {
  const PRCurve env = envelope(curve);
  plot::Chart chart;
  chart.title = title;
  chart.x_label = "recall";
  chart.y_label = "precision";
  chart.x_min = 0.0;
  chart.x_max = 1.0;
  chart.y_min = 0.0;
  chart.y_max = 1.05;
  plot::Series raw{"curve", {}, "#1f77b4", true, false, false};
  plot::Series dashed{"envelope", {}, "#d62728", true, true, true};
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    raw.points.emplace_back(curve.points[k].recall, curve.points[k].precision);
    dashed.points.emplace_back(env.points[k].recall, env.points[k].precision);
  }
  chart.series = {raw, dashed};
  return plot::render_svg(chart);
}

}  // namespace rca::fitap
