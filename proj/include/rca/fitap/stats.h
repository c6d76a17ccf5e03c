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

#ifndef RCA_FITAP_STATS_H_
#define RCA_FITAP_STATS_H_

#include <cstddef>
#include <span>
#include <string>

namespace rca::fitap {

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-tailed
  std::size_t n = 0;
};

// Two-tailed p-value of a sample correlation r over n pairs, from
// t = r sqrt(n-2) / sqrt(1-r^2) with n-2 degrees of freedom.
double correlation_p_value(double r, std::size_t n);

// Sample Pearson correlation. Throws InvalidInputError for mismatched
// lengths or n < 3, UndefinedCorrelationError for a constant series.
Correlation pearson(std::span<const double> xs, std::span<const double> ys);

// Pearson correlation of mid-ranks; p-value from the same t approximation.
Correlation spearman(std::span<const double> xs, std::span<const double> ys);

// 100 (post - pre) / pre. Throws InvalidInputError when pre is zero.
double percent_change(double pre, double post);

// Signed percentage with 3 significant figures and at most 2 decimals,
// e.g. "+26.6", "+139", "+0.17", "-5.51".
std::string format_percent_change(double percent);

}  // namespace rca::fitap

#endif  // RCA_FITAP_STATS_H_
