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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rca/error.h"

namespace rca::analysis {

BoundAuditReport audit_flooring_bound(std::size_t num_instances, std::uint64_t seed) {
  if (num_instances == 0) throw ConfigError("audit needs at least one instance");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> tokens_dist(2, 48);
  std::uniform_int_distribution<std::size_t> heads_dist(1, 6);
  std::uniform_int_distribution<std::size_t> dims_dist(1, 16);
  std::uniform_real_distribution<double> log_tau(std::log(0.05), std::log(20.0));
  std::uniform_real_distribution<double> log_gamma(std::log(0.1), std::log(50.0));
  std::uniform_real_distribution<double> theta_dist(-2.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  BoundAuditReport report;
  report.instances = num_instances;
  report.max_slack = -std::numeric_limits<double>::infinity();
  report.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < num_instances; ++k) {
    SyntheticFamilyConfig family;
    family.tokens = tokens_dist(rng);
    family.heads = heads_dist(rng);
    family.dims = dims_dist(rng);
    family.tau = std::exp(log_tau(rng));
    family.seed = rng();
    const SyntheticInstance inst = gen_synthetic_attention(family);

    core::RcaConfig rca;
    rca.scheme = coin(rng) ? core::Scheme::kGaussian : core::Scheme::kInverseDistance;
    rca.gamma = std::exp(log_gamma(rng));
    const core::ReweightedAttention attn = core::apply_rca(inst.stack, rca);
    const core::HiddenStates hidden = core::aggregate(attn, inst.values);

    const std::size_t token =
        std::uniform_int_distribution<std::size_t>(0, family.tokens - 1)(rng);
    const std::size_t dim = std::uniform_int_distribution<std::size_t>(0, family.dims - 1)(rng);
    const double theta = theta_dist(rng);

    const core::TokenPartition partition =
        core::partition_by_threshold(inst.values, theta, dim);
    const double bound = core::flooring_lower_bound(attn.row(token), partition);
    const double slack = hidden(token, dim) - bound;

    if (partition.below.empty()) ++report.empty_below;
    if (slack < -kBoundSlackTolerance) ++report.violations;
    report.max_slack = std::max(report.max_slack, slack);
    report.min_slack = std::min(report.min_slack, slack);
  }
  return report;
}

}  // namespace rca::analysis
