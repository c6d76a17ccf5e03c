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

#include "rca/analysis/analysis.h"

#include <fmt/format.h>

#include "rca/error.h"

namespace rca::analysis {

CorrelationStudy correlation_study(const std::vector<dumpio::AttentionDump>& dumps,
                                   double theta, std::optional<std::size_t> token) {
  if (dumps.size() < 3) {
    throw InvalidInputError("correlation study needs at least 3 dumps, got " +
                            std::to_string(dumps.size()));
  }
  CorrelationStudy study;
  std::vector<double> ms, counts;
  for (const auto& dump : dumps) {
    const core::HiddenStates hidden = dump.hidden_states();
    const std::size_t t = token.value_or(hidden.tokens() - 1);
    ScatterPoint p;
    p.m = core::central_value(dump.stack());
    p.s_count = core::subthreshold_count(hidden, theta, t);
    p.theta = theta;
    if (auto it = dump.metadata.find("seed"); it != dump.metadata.end()) p.seed = it->second;
    ms.push_back(p.m);
    counts.push_back(static_cast<double>(p.s_count));
    study.points.push_back(std::move(p));
  }
  study.pearson = fitap::pearson(ms, counts);
  study.spearman = fitap::spearman(ms, counts);
  return study;
}

std::string scatter_csv(const std::vector<ScatterPoint>& points) {
  std::string out = "m,s_count,theta,seed\n";
  for (const auto& p : points) {
    out += fmt::format("{},{},{},{}\n", p.m, p.s_count, p.theta, p.seed);
  }
  return out;
}

}  // namespace rca::analysis
