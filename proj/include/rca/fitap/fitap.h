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

// Confidence-free average precision.
//
// Detections from a generative model carry no confidence score, so they are
// ranked by fit score = normalized box area x best IoU against the ground
// truth of the same image and category. From that ranking the usual pipeline
// follows: greedy one-to-one matching at an IoU threshold, a precision/recall
// curve, its monotone envelope, all-point AP, and FitAP as the mean AP over
// the threshold ladder 0.50:0.05:0.95.

#ifndef RCA_FITAP_FITAP_H_
#define RCA_FITAP_FITAP_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rca/detparse/box.h"
#include "rca/fitap/stats.h"

namespace rca::fitap {

using detparse::NormalizedBox;

struct GroundTruthBox {
  std::string image_id;
  std::string category;
  NormalizedBox box;
};

struct Detection {
  std::string image_id;
  std::string category;
  NormalizedBox box;
  double fit_score = 0.0;  // set by score_detections()
};

enum class MatchLabel { kTruePositive, kFalsePositive };

struct MatchedDetection {
  Detection detection;
  MatchLabel label = MatchLabel::kFalsePositive;
  double iou = 0.0;                     // IoU with the chosen ground truth
  std::optional<std::size_t> gt_index;  // index into the gts argument, if TP
};

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  friend bool operator==(const PRPoint&, const PRPoint&) = default;
};

struct PRCurve {
  std::vector<PRPoint> points;  // recall non-decreasing
  std::size_t n_gt = 0;
};

struct CategoryReport {
  std::string category;
  std::size_t n_gt = 0;
  std::size_t n_det = 0;
  std::vector<double> ap;       // parallel to EvalReport::thresholds
  double fitap = 0.0;
  std::vector<PRCurve> curves;  // raw curves, parallel to thresholds
};

struct EvalReport {
  std::vector<double> thresholds;
  std::vector<double> ap;  // category-mean AP per threshold
  double fitap = 0.0;
  std::vector<CategoryReport> categories;  // sorted by name
};

// {0.50, 0.55, ..., 0.95}.
std::vector<double> default_thresholds();

// Area of `det` times the best IoU over `gts`, which the caller has already
// restricted to the detection's image and category. 0 when `gts` is empty.
double fit_score(const Detection& det, std::span<const GroundTruthBox> gts);

// Fills fit_score for every detection against the matching image/category.
void score_detections(std::span<Detection> dets, std::span<const GroundTruthBox> gts);

// Ranks `dets` by fit score (descending, stable) and matches greedily: each
// detection takes the unmatched same-image same-category ground truth with
// the highest IoU, and is a true positive iff that IoU reaches `threshold`.
std::vector<MatchedDetection> match_at_threshold(std::span<const Detection> dets,
                                                 std::span<const GroundTruthBox> gts,
                                                 double threshold);

// One (recall, precision) point per ranked detection. Throws
// UndefinedRecallError when n_gt is zero.
PRCurve pr_curve(std::span<const MatchLabel> labels, std::size_t n_gt);

// Replaces each precision with the maximum precision at any recall >= its own.
PRCurve envelope(const PRCurve& curve);

// Area under the envelope over recall, all-point interpolation. 0 for an
// empty curve.
double average_precision(const PRCurve& curve);

// Arithmetic mean of per-threshold APs.
double mean_ap(std::span<const double> aps);

// Full evaluation. Category APs are averaged with equal weight over the
// categories that have ground truth, then FitAP averages over thresholds.
// Throws NoGroundTruthError when `gts` is empty.
EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                    std::span<const double> thresholds);
EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruthBox> gts);

struct AreaCorrelation {
  Correlation area;  // GT area vs detection area
  Correlation fit;   // GT area vs fit score
  std::size_t pairs = 0;
};

// Pairs every detection with its best-IoU ground truth (IoU > 0) and
// correlates areas. Throws InvalidInputError for fewer than 3 pairs.
AreaCorrelation area_correlation_report(std::span<const Detection> dets,
                                        std::span<const GroundTruthBox> gts);

}  // namespace rca::fitap

#endif  // RCA_FITAP_FITAP_H_
