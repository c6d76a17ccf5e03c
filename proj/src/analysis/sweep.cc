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

core::HiddenStates rca_hidden_states(const SyntheticInstance& instance,
                                     const core::RcaConfig& rca) {
  return core::aggregate(core::apply_rca(instance.stack, rca), instance.values);
}

std::vector<SweepPoint> sharpness_sweep(const SweepConfig& cfg) {
  if (cfg.taus.size() < 2) {
    throw ConfigError("sharpness sweep needs at least 2 temperatures");
  }
  if (cfg.seeds_per_tau == 0) throw ConfigError("sharpness sweep needs at least 1 seed");
  cfg.rca.Validate();
  const std::size_t token = cfg.token.value_or(cfg.family.tokens - 1);
  if (token >= cfg.family.tokens) {
    throw DimensionError("designated token " + std::to_string(token) + " out of range");
  }

  std::vector<SweepPoint> points;
  points.reserve(cfg.taus.size() * cfg.seeds_per_tau);
  for (std::size_t t = 0; t < cfg.taus.size(); ++t) {
    for (std::size_t s = 0; s < cfg.seeds_per_tau; ++s) {
      SyntheticFamilyConfig family = cfg.family;
      family.tau = cfg.taus[t];
      family.seed = cfg.family.seed + s;
      const SyntheticInstance inst = gen_synthetic_attention(family);
      const core::HiddenStates hidden = rca_hidden_states(inst, cfg.rca);
      points.push_back({t, family.tau, family.seed, core::central_value(inst.stack),
                        core::subthreshold_count(hidden, cfg.theta, token), cfg.theta});
    }
  }
  return points;
}

SweepSummary summarize_sweep(const std::vector<SweepPoint>& points) {
  SweepSummary out;
  // Points arrive grouped by grid position.
  for (std::size_t k = 0; k < points.size();) {
    const std::size_t index = points[k].tau_index;
    const double tau = points[k].tau;
    double sum_m = 0.0, sum_s = 0.0;
    std::size_t count = 0;
    for (; k < points.size() && points[k].tau_index == index; ++k, ++count) {
      sum_m += points[k].m;
      sum_s += static_cast<double>(points[k].s_count);
    }
    out.taus.push_back(tau);
    out.mean_m.push_back(sum_m / static_cast<double>(count));
    out.mean_s.push_back(sum_s / static_cast<double>(count));
  }
  try {
    out.spearman = fitap::spearman(out.mean_m, out.mean_s);
    out.pearson = fitap::pearson(out.mean_m, out.mean_s);
  } catch (const UndefinedCorrelationError& e) {
    out.spearman.reset();
    out.pearson.reset();
    out.note = e.what();
  } catch (const InvalidInputError& e) {
    out.spearman.reset();
    out.pearson.reset();
    out.note = e.what();
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string out = "m,s_count,theta,seed\n";
  for (const auto& p : points) {
    out += fmt::format("{},{},{},{}\n", p.m, p.s_count, p.theta, p.seed);
  }
  return out;
}

}  // namespace rca::analysis
