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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "rca/error.h"

namespace rca::analysis {
namespace {

SyntheticFamilyConfig Family(std::size_t n, std::size_t h, std::size_t d, double tau,
                             std::uint64_t seed = 1) {
  SyntheticFamilyConfig cfg;
  cfg.tokens = n;
  cfg.heads = h;
  cfg.dims = d;
  cfg.tau = tau;
  cfg.seed = seed;
  return cfg;
}

TEST(SyntheticTest, ValidatesConfig) {
  EXPECT_THROW(gen_synthetic_attention(Family(0, 1, 1, 1.0)), ConfigError);
  EXPECT_THROW(gen_synthetic_attention(Family(1, 0, 1, 1.0)), ConfigError);
  EXPECT_THROW(gen_synthetic_attention(Family(1, 1, 0, 1.0)), ConfigError);
  EXPECT_THROW(gen_synthetic_attention(Family(4, 1, 1, 0.0)), ConfigError);
  EXPECT_THROW(gen_synthetic_attention(Family(4, 1, 1, -2.0)), ConfigError);
}

TEST(SyntheticTest, HotLimitIsUniform) {
  const auto inst = gen_synthetic_attention(Family(64, 4, 8, 1e6));
  for (double w : inst.stack.weights()) ASSERT_NEAR(w, 1.0 / 64, 1e-4);
  EXPECT_NEAR(core::central_value(inst.stack), 1.0 / 64, 1e-4);
}

TEST(SyntheticTest, ColdLimitIsOneHot) {
  const std::size_t n = 8, heads = 16;
  const auto inst = gen_synthetic_attention(Family(n, heads, 4, 1e-6, 3));
  std::set<std::size_t> hit;
  for (std::size_t h = 0; h < heads; ++h) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = inst.stack.head_row(h, i);
      const auto top = std::max_element(row.begin(), row.end());
      ASSERT_NEAR(*top, 1.0, 1e-4);
      hit.insert(static_cast<std::size_t>(top - row.begin()));
    }
  }
  // Each column's maximum is ~1 if some row points at it and ~0 otherwise.
  const double m = core::central_value(inst.stack);
  EXPECT_NEAR(m, static_cast<double>(hit.size()) / n, 1e-4);
  EXPECT_NEAR(m, 1.0, 1e-4);
}

TEST(SyntheticTest, DeterministicUnderSeed) {
  const auto a = gen_synthetic_attention(Family(12, 3, 5, 0.7, 99));
  const auto b = gen_synthetic_attention(Family(12, 3, 5, 0.7, 99));
  const auto c = gen_synthetic_attention(Family(12, 3, 5, 0.7, 100));
  EXPECT_EQ(a.stack.weights(), b.stack.weights());
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.stack.weights(), c.stack.weights());
}

TEST(LogTauGridTest, Spacing) {
  const auto grid = log_tau_grid(0.01, 100.0, 20);
  ASSERT_EQ(grid.size(), 20u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.01);
  EXPECT_DOUBLE_EQ(grid.back(), 100.0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    EXPECT_NEAR(std::log(grid[k] / grid[k - 1]), std::log(1e4) / 19, 1e-12);
  }
  EXPECT_THROW(log_tau_grid(0.0, 1.0, 3), ConfigError);
  EXPECT_THROW(log_tau_grid(1.0, 2.0, 0), ConfigError);
  EXPECT_EQ(log_tau_grid(3.0, 9.0, 1), (std::vector<double>{3.0}));
}

SweepConfig SmallSweep() {
  SweepConfig cfg;
  cfg.family = Family(16, 2, 64, 1.0, 5);
  cfg.taus = log_tau_grid(0.01, 100.0, 8);
  cfg.seeds_per_tau = 6;
  cfg.theta = -1.5;
  cfg.rca.scheme = core::Scheme::kGaussian;
  cfg.rca.gamma = 200.0;
  return cfg;
}

TEST(SweepTest, SingleTemperatureRejected) {
  SweepConfig cfg = SmallSweep();
  cfg.taus = {1.0};
  EXPECT_THROW(sharpness_sweep(cfg), ConfigError);
}

TEST(SweepTest, PointsInGridOrder) {
  const SweepConfig cfg = SmallSweep();
  const auto points = sharpness_sweep(cfg);
  ASSERT_EQ(points.size(), 48u);
  for (std::size_t k = 0; k < points.size(); ++k) {
    EXPECT_EQ(points[k].tau_index, k / 6);
    EXPECT_EQ(points[k].tau, cfg.taus[k / 6]);
    EXPECT_EQ(points[k].seed, 5 + k % 6);
    EXPECT_GT(points[k].m, 0.0);
    EXPECT_LE(points[k].m, 1.0);
    EXPECT_LE(points[k].s_count, 64u);
  }
}

TEST(SweepTest, RecomputesEachPoint) {
  const SweepConfig cfg = SmallSweep();
  const auto points = sharpness_sweep(cfg);
  const SweepPoint& p = points[13];
  SyntheticFamilyConfig family = cfg.family;
  family.tau = p.tau;
  family.seed = p.seed;
  const auto inst = gen_synthetic_attention(family);
  EXPECT_EQ(p.m, core::central_value(inst.stack));
  EXPECT_EQ(p.s_count, core::subthreshold_count(rca_hidden_states(inst, cfg.rca), -1.5, 15));
}

TEST(SweepTest, Deterministic) {
  const SweepConfig cfg = SmallSweep();
  EXPECT_EQ(sweep_csv(sharpness_sweep(cfg)), sweep_csv(sharpness_sweep(cfg)));
}

TEST(SweepTest, EqualTemperaturesGiveEqualMeans) {
  SweepConfig cfg = SmallSweep();
  cfg.taus = {0.5, 0.5, 0.5};
  const SweepSummary s = summarize_sweep(sharpness_sweep(cfg));
  ASSERT_EQ(s.mean_m.size(), 3u);
  EXPECT_EQ(s.mean_m[0], s.mean_m[1]);
  EXPECT_EQ(s.mean_m[1], s.mean_m[2]);
  EXPECT_FALSE(s.spearman.has_value());
  EXPECT_FALSE(s.note.empty());
}

TEST(SweepTest, SummaryGroupsByTemperature) {
  std::vector<SweepPoint> points;
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t s = 0; s < 3; ++s) {
      points.push_back({t, 1.0 + t, s, 0.1 * (t + 1), 10 - 2 * t + s, -1.5});
    }
  }
  const SweepSummary s = summarize_sweep(points);
  EXPECT_EQ(s.taus, (std::vector<double>{1, 2, 3, 4}));
  EXPECT_DOUBLE_EQ(s.mean_s[0], 11.0);
  EXPECT_DOUBLE_EQ(s.mean_s[3], 5.0);
  ASSERT_TRUE(s.spearman.has_value());
  EXPECT_NEAR(s.spearman->r, -1.0, 1e-12);
  EXPECT_NEAR(s.pearson->r, -1.0, 1e-12);
}

TEST(SweepTest, ConstantCountsLeaveTrendUndefined) {
  std::vector<SweepPoint> points;
  for (std::size_t t = 0; t < 5; ++t) points.push_back({t, 1.0 + t, 0, 0.1 * (t + 1), 0, -1.5});
  const SweepSummary s = summarize_sweep(points);
  EXPECT_FALSE(s.spearman.has_value());
  EXPECT_FALSE(s.pearson.has_value());
  EXPECT_NE(s.note.find("constant"), std::string::npos) << s.note;
}

TEST(AuditTest, NoViolations) {
  const BoundAuditReport r = audit_flooring_bound(10000, 2024);
  EXPECT_EQ(r.instances, 10000u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GE(r.min_slack, -kBoundSlackTolerance);
  EXPECT_GT(r.empty_below, 0u);
  EXPECT_LT(r.empty_below, r.instances);
}

TEST(AuditTest, OtherSeeds) {
  for (std::uint64_t seed : {1, 2, 3}) EXPECT_EQ(audit_flooring_bound(500, seed).violations, 0u);
  EXPECT_THROW(audit_flooring_bound(0, 1), ConfigError);
}

TEST(AuditTest, EmptyAndTightSlack) {
  const core::ValueMatrix v(3, 1, {-2.0, -1.6, 0.5});
  const auto one_hot = core::ReweightedAttention::FromStochastic(
      core::Matrix(3, 3, std::vector<double>{1, 0, 0, 0, 1, 0, 0, 0, 1}));
  const core::HiddenStates z = core::aggregate(one_hot, v);
  const auto tight = core::partition_by_threshold(v, -1.5, 0);
  EXPECT_NEAR(z(0, 0) - core::flooring_lower_bound(one_hot.row(0), tight), 0.0, 1e-12);
  const auto empty = core::partition_by_threshold(v, -3.0, 0);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(core::flooring_lower_bound(one_hot.row(i), empty), -3.0);
    EXPECT_GE(z(i, 0) - -3.0, 0.0);
  }
}

std::vector<dumpio::AttentionDump> SweepDumps(const SweepConfig& cfg) {
  std::vector<dumpio::AttentionDump> dumps;
  for (double tau : cfg.taus) {
    for (std::size_t s = 0; s < cfg.seeds_per_tau; ++s) {
      SyntheticFamilyConfig family = cfg.family;
      family.tau = tau;
      family.seed = cfg.family.seed + s;
      const auto inst = gen_synthetic_attention(family);
      auto dump = dumpio::make_dump(inst.stack, inst.values, rca_hidden_states(inst, cfg.rca));
      dump.metadata["seed"] = std::to_string(family.seed);
      dumps.push_back(std::move(dump));
    }
  }
  return dumps;
}

TEST(CorrelationStudyTest, NeedsThreeDumps) {
  auto dumps = SweepDumps(SmallSweep());
  dumps.resize(2);
  EXPECT_THROW(correlation_study(dumps, -1.5), InvalidInputError);
}

TEST(CorrelationStudyTest, IdenticalMIsUndefined) {
  SweepConfig cfg = SmallSweep();
  cfg.taus = {0.3};
  cfg.seeds_per_tau = 1;
  auto dumps = SweepDumps(cfg);
  dumps.push_back(dumps[0]);
  dumps.push_back(dumps[0]);
  EXPECT_THROW(correlation_study(dumps, -1.5), UndefinedCorrelationError);
}

TEST(CorrelationStudyTest, AgreesWithSweepOnSameInstances) {
  const SweepConfig cfg = SmallSweep();
  const auto points = sharpness_sweep(cfg);
  const CorrelationStudy study = correlation_study(SweepDumps(cfg), cfg.theta);
  ASSERT_EQ(study.points.size(), points.size());
  std::vector<double> ms, counts;
  for (const auto& p : points) {
    ms.push_back(p.m);
    counts.push_back(static_cast<double>(p.s_count));
  }
  const fitap::Correlation direct = fitap::pearson(ms, counts);
  // Dumps hold f32 copies, so m and |S| can shift by rounding only.
  EXPECT_NEAR(study.pearson.r, direct.r, 0.05);
  EXPECT_EQ(std::signbit(study.pearson.r), std::signbit(direct.r));
  EXPECT_EQ(study.points[7].seed, std::to_string(points[7].seed));
  const std::string csv = scatter_csv(study.points);
  EXPECT_EQ(csv.rfind("m,s_count,theta,seed\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 49);
}

}  // namespace
}  // namespace rca::analysis
