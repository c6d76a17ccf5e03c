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
#include <random>

#include "rca/error.h"

namespace rca::analysis {

void SyntheticFamilyConfig::Validate() const {
  if (tokens == 0 || heads == 0 || dims == 0) {
    throw ConfigError("synthetic family needs tokens, heads and dims >= 1");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ConfigError("temperature must be positive and finite");
  }
}

SyntheticInstance gen_synthetic_attention(const SyntheticFamilyConfig& cfg) {
  cfg.Validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = cfg.tokens;

  std::vector<double> weights(cfg.heads * n * n);
  std::vector<double> logits(n);
  for (std::size_t row = 0; row < cfg.heads * n; ++row) {
    for (double& l : logits) l = normal(rng) / cfg.tau;
    const double peak = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    double* out = weights.data() + row * n;
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = std::exp(logits[j] - peak);
      sum += out[j];
    }
    for (std::size_t j = 0; j < n; ++j) out[j] /= sum;
  }

  std::vector<double> values(n * cfg.dims);
  for (double& v : values) v = normal(rng);
  return {core::AttentionStack(cfg.heads, n, std::move(weights)),
          core::ValueMatrix(n, cfg.dims, std::move(values))};
}

std::vector<double> log_tau_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > 0.0) || count == 0) {
    throw ConfigError("tau grid needs positive bounds and at least one point");
  }
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    grid[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace rca::analysis
