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

// Desk-scale experiments around the flooring bound:
//
//  * a controllable synthetic attention family (softmax temperature tau over
//    standard-normal logits, standard-normal value vectors),
//  * a sharpness sweep recording (m, |S|) along a tau grid,
//  * a randomized audit of the flooring lower bound,
//  * the |S|-versus-m correlation study over attention dumps.

#ifndef RCA_ANALYSIS_ANALYSIS_H_
#define RCA_ANALYSIS_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rca/core/attention.h"
#include "rca/dumpio/dump.h"
#include "rca/fitap/stats.h"

namespace rca::analysis {

struct SyntheticFamilyConfig {
  std::size_t tokens = 64;
  std::size_t heads = 4;
  std::size_t dims = 256;
  double tau = 1.0;  // softmax temperature; small is sharp
  std::uint64_t seed = 0;

  void Validate() const;
};

struct SyntheticInstance {
  core::AttentionStack stack;
  core::ValueMatrix values;
};

// Deterministic for a given config.
SyntheticInstance gen_synthetic_attention(const SyntheticFamilyConfig& cfg);

// `count` log-spaced temperatures from `lo` to `hi` inclusive.
std::vector<double> log_tau_grid(double lo, double hi, std::size_t count);

struct SweepConfig {
  SyntheticFamilyConfig family;  // tau is taken from `taus`, seed is the base seed
  std::vector<double> taus;
  std::size_t seeds_per_tau = 50;
  double theta = -1.5;
  core::RcaConfig rca;
  std::optional<std::size_t> token;  // default: last token
};

struct SweepPoint {
  std::size_t tau_index = 0;  // position in SweepConfig::taus
  double tau = 0.0;
  std::uint64_t seed = 0;
  double m = 0.0;
  std::size_t s_count = 0;
  double theta = 0.0;
};

// For every tau and every seed in [base, base + seeds_per_tau): generate,
// apply RCA, aggregate, count |S| at theta for the designated token. The
// same seed is reused across temperatures. Points are ordered by tau index,
// then seed. Throws ConfigError for fewer than 2 temperatures.
std::vector<SweepPoint> sharpness_sweep(const SweepConfig& cfg);

struct SweepSummary {
  std::vector<double> taus;
  std::vector<double> mean_m;
  std::vector<double> mean_s;
  // Rank and linear correlation of (mean m, mean |S|) across temperatures.
  // Empty when either series is constant; `note` then says why.
  std::optional<fitap::Correlation> spearman;
  std::optional<fitap::Correlation> pearson;
  std::string note;
};

SweepSummary summarize_sweep(const std::vector<SweepPoint>& points);

// Scatter CSV with columns m,s_count,theta,seed.
std::string sweep_csv(const std::vector<SweepPoint>& points);

// Hidden states after RCA for one synthetic instance.
core::HiddenStates rca_hidden_states(const SyntheticInstance& instance,
                                     const core::RcaConfig& rca);

// Above this magnitude a negative slack counts as a violation.
inline constexpr double kBoundSlackTolerance = 1e-12;

struct BoundAuditReport {
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::size_t empty_below = 0;  // instances with no subthreshold token
  double max_slack = 0.0;
  double min_slack = 0.0;
};

// Random stacks, schemes, gammas, values and thresholds; for each instance
// the aggregated component of one (token, dim) is compared with
// flooring_lower_bound. Throws ConfigError when num_instances is zero.
BoundAuditReport audit_flooring_bound(std::size_t num_instances, std::uint64_t seed);

struct ScatterPoint {
  double m = 0.0;
  std::size_t s_count = 0;
  double theta = 0.0;
  std::string seed;  // from the dump's "seed" metadata, if any
};

struct CorrelationStudy {
  fitap::Correlation pearson;
  std::optional<fitap::Correlation> spearman;
  std::vector<ScatterPoint> points;
};

// m from each dump's attention, |S| from its stored hidden states at the
// designated token (default last). Throws InvalidInputError for fewer than
// 3 dumps and UndefinedCorrelationError for a constant series.
CorrelationStudy correlation_study(const std::vector<dumpio::AttentionDump>& dumps,
                                   double theta,
                                   std::optional<std::size_t> token = std::nullopt);

std::string scatter_csv(const std::vector<ScatterPoint>& points);

}  // namespace rca::analysis

#endif  // RCA_ANALYSIS_ANALYSIS_H_
