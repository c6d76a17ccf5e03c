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

#ifndef RCA_FITAP_REPORT_H_
#define RCA_FITAP_REPORT_H_

#include <string>

#include <nlohmann/json.hpp>

#include "rca/fitap/fitap.h"

namespace rca::fitap {

nlohmann::json report_to_json(const EvalReport& report);

// "threshold,ap" rows followed by a "fitap" row.
std::string thresholds_csv(const EvalReport& report);

// "category,threshold,ap,n_gt,n_det" rows.
std::string categories_csv(const EvalReport& report);

// "rank,recall,precision,envelope_precision" rows.
std::string pr_curve_csv(const PRCurve& curve);

// Raw curve (solid) and its envelope (dashed).
std::string pr_curve_svg(const PRCurve& curve, const std::string& title);

}  // namespace rca::fitap

#endif  // RCA_FITAP_REPORT_H_
