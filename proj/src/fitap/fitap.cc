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

#include "rca/fitap/fitap.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include "rca/error.h"

namespace rca::fitap {
namespace {

using GroupKey = std::pair<std::string, std::string>;  // (image_id, category)

std::map<GroupKey, std::vector<std::size_t>> GroupGroundTruth(
    std::span<const GroundTruthBox> gts) {
  std::map<GroupKey, std::vector<std::size_t>> groups;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    groups[{gts[g].image_id, gts[g].category}].push_back(g);
  }
  return groups;
}

}  // namespace

std::vector<double> default_thresholds() {
  std::vector<double> thresholds;
  for (int step = 0; step < 10; ++step) thresholds.push_back((50 + 5 * step) / 100.0);
  return thresholds;
}

double fit_score(const Detection& det, std::span<const GroundTruthBox> gts) {
  double best = 0.0;
  for (const auto& gt : gts) best = std::max(best, detparse::iou(det.box, gt.box));
  return det.box.area() * best;
}

void score_detections(std::span<Detection> dets, std::span<const GroundTruthBox> gts) {
  const auto groups = GroupGroundTruth(gts);
  for (auto& det : dets) {
    double best = 0.0;
    if (auto it = groups.find({det.image_id, det.category}); it != groups.end()) {
      for (std::size_t g : it->second) {
        best = std::max(best, detparse::iou(det.box, gts[g].box));
      }
    }
    det.fit_score = det.box.area() * best;
  }
}

std::vector<MatchedDetection> match_at_threshold(std::span<const Detection> dets,
                                                 std::span<const GroundTruthBox> gts,
                                                 double threshold) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].fit_score > dets[b].fit_score;
  });

  const auto groups = GroupGroundTruth(gts);
  std::vector<bool> consumed(gts.size(), false);
  std::vector<MatchedDetection> out;
  out.reserve(dets.size());
  for (std::size_t idx : order) {
    const Detection& det = dets[idx];
    MatchedDetection matched{det, MatchLabel::kFalsePositive, 0.0, std::nullopt};
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    if (auto it = groups.find({det.image_id, det.category}); it != groups.end()) {
      for (std::size_t g : it->second) {
        if (consumed[g]) continue;
        const double v = detparse::iou(det.box, gts[g].box);
        if (v > best_iou) {
          best_iou = v;
          best = g;
        }
      }
    }
    if (best) {
      matched.iou = best_iou;
      if (best_iou >= threshold) {
        matched.label = MatchLabel::kTruePositive;
        matched.gt_index = best;
        consumed[*best] = true;
      }
    }
    out.push_back(std::move(matched));
  }
  return out;
}

PRCurve pr_curve(std::span<const MatchLabel> labels, std::size_t n_gt) {
  if (n_gt == 0) throw UndefinedRecallError("recall is undefined without ground truth");
  PRCurve curve;
  curve.n_gt = n_gt;
  curve.points.reserve(labels.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == MatchLabel::kTruePositive) ++tp;
    curve.points.push_back({static_cast<double>(tp) / static_cast<double>(n_gt),
                            static_cast<double>(tp) / static_cast<double>(k + 1)});
  }
  return curve;
}

PRCurve envelope(const PRCurve& curve) {
  PRCurve out = curve;
  auto& pts = out.points;
  for (std::size_t k = pts.size(); k-- > 1;) {
    pts[k - 1].precision = std::max(pts[k - 1].precision, pts[k].precision);
  }
  // Points sharing a recall also see the precision of earlier points at
  // that recall.
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (pts[k].recall == pts[k - 1].recall) {
      pts[k].precision = std::max(pts[k].precision, pts[k - 1].precision);
    }
  }
  return out;
}

double average_precision(const PRCurve& curve) {
  const PRCurve env = envelope(curve);
  double area = 0.0;
  double prev_recall = 0.0;
  for (const auto& pt : env.points) {
    area += (pt.recall - prev_recall) * pt.precision;
    prev_recall = pt.recall;
  }
  return std::clamp(area, 0.0, 1.0);
}

double mean_ap(std::span<const double> aps) {
  if (aps.empty()) throw InvalidInputError("cannot average an empty AP list");
  double sum = 0.0;
  for (double ap : aps) sum += ap;
  return sum / static_cast<double>(aps.size());
}

EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                    std::span<const double> thresholds) {
  if (gts.empty()) throw NoGroundTruthError("evaluation needs at least one ground-truth box");
  if (thresholds.empty()) throw ConfigError("threshold ladder is empty");
  for (double t : thresholds) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("IoU thresholds must lie in (0, 1]");
  }

  std::vector<Detection> scored(dets.begin(), dets.end());
  score_detections(scored, gts);

  std::map<std::string, std::pair<std::vector<GroundTruthBox>, std::vector<Detection>>>
      by_category;
  for (const auto& gt : gts) by_category[gt.category].first.push_back(gt);
  for (const auto& det : scored) {
    if (auto it = by_category.find(det.category); it != by_category.end()) {
      it->second.second.push_back(det);
    }
  }

  EvalReport report;
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  for (const auto& [category, group] : by_category) {
    const auto& [cat_gts, cat_dets] = group;
    CategoryReport cat;
    cat.category = category;
    cat.n_gt = cat_gts.size();
    cat.n_det = cat_dets.size();
    for (double threshold : thresholds) {
      const auto matched = match_at_threshold(cat_dets, cat_gts, threshold);
      std::vector<MatchLabel> labels;
      labels.reserve(matched.size());
      for (const auto& m : matched) labels.push_back(m.label);
      PRCurve curve = pr_curve(labels, cat_gts.size());
      cat.ap.push_back(average_precision(curve));
      cat.curves.push_back(std::move(curve));
    }
    cat.fitap = mean_ap(cat.ap);
    report.categories.push_back(std::move(cat));
  }

  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    double sum = 0.0;
    for (const auto& cat : report.categories) sum += cat.ap[t];
    report.ap.push_back(sum / static_cast<double>(report.categories.size()));
  }
  report.fitap = mean_ap(report.ap);
  return report;
}

EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruthBox> gts) {
  const auto thresholds = default_thresholds();
  return evaluate(dets, gts, thresholds);
}

AreaCorrelation area_correlation_report(std::span<const Detection> dets,
                                        std::span<const GroundTruthBox> gts) {
  const auto groups = GroupGroundTruth(gts);
  std::vector<double> gt_area;
  std::vector<double> det_area;
  std::vector<double> fit;
  for (const auto& det : dets) {
    auto it = groups.find({det.image_id, det.category});
    if (it == groups.end()) continue;
    double best_iou = 0.0;
    std::optional<std::size_t> best;
    for (std::size_t g : it->second) {
      const double v = detparse::iou(det.box, gts[g].box);
      if (v > best_iou) {
        best_iou = v;
        best = g;
      }
    }
    if (!best) continue;
    gt_area.push_back(gts[*best].box.area());
    det_area.push_back(det.box.area());
    fit.push_back(det.box.area() * best_iou);
  }
  if (gt_area.size() < 3) {
    throw InvalidInputError("area correlation needs at least 3 matched pairs, got " +
                            std::to_string(gt_area.size()));
  }
  AreaCorrelation out;
  out.pairs = gt_area.size();
  out.area = pearson(gt_area, det_area);
  out.fit = pearson(gt_area, fit);
  return out;
}

}  // namespace rca::fitap
