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

#include "rca/fitap/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "rca/error.h"

namespace rca::fitap {
namespace {

void CheckPairs(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw InvalidInputError("correlation series differ in length");
  }
  if (xs.size() < 3) {
    throw InvalidInputError("correlation needs at least 3 pairs");
  }
}

// Mid-ranks (ties share the average of their positions), 1-based.
std::vector<double> MidRanks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double correlation_p_value(double r, std::size_t n) {
  if (n < 3) throw InvalidInputError("p-value needs at least 3 pairs");
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = std::abs(r) * std::sqrt(df) / std::sqrt(1.0 - r2);
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

Correlation pearson(std::span<const double> xs, std::span<const double> ys) {
  CheckPairs(xs, ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelationError("correlation is undefined for a constant series");
  }
  Correlation c;
  c.n = xs.size();
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  c.p = correlation_p_value(c.r, c.n);
  return c;
}

Correlation spearman(std::span<const double> xs, std::span<const double> ys) {
  CheckPairs(xs, ys);
  const auto rx = MidRanks(xs);
  const auto ry = MidRanks(ys);
  return pearson(rx, ry);
}

double percent_change(double pre, double post) {
  if (pre == 0.0) throw InvalidInputError("percent change from zero is undefined");
  return 100.0 * (post - pre) / pre;
}

std::string format_percent_change(double percent) {
  if (percent == 0.0) return "0.00";
  const auto decimals_for = [](double v) {
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(v))));
    return std::clamp(2 - magnitude, 0, 2);
  };
  int decimals = decimals_for(percent);
  // Rounding can carry into the next power of ten (9.996 -> 10.00).
  const double scale = std::pow(10.0, decimals);
  const double rounded = std::round(percent * scale) / scale;
  if (rounded != 0.0) decimals = std::min(decimals, decimals_for(rounded));
  return fmt::format("{:+.{}f}", percent, decimals);
}

}  // namespace rca::fitap
