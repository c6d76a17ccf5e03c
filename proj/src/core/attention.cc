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

#include "rca/core/attention.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rca/error.h"

namespace rca::core {
namespace {

std::string ShapeString(std::size_t a, std::size_t b) {
  return std::to_string(a) + "x" + std::to_string(b);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix " + ShapeString(rows, cols) + " given " +
                         std::to_string(data_.size()) + " values");
  }
}

AttentionStack::AttentionStack(std::size_t heads, std::size_t tokens,
                               std::vector<double> weights,
                               double row_sum_tolerance)
    : heads_(heads), tokens_(tokens), weights_(std::move(weights)) {
  if (heads_ == 0 || tokens_ == 0) {
    throw DimensionError("attention stack needs at least one head and token");
  }
  if (weights_.size() != heads_ * tokens_ * tokens_) {
    throw DimensionError("attention stack " + std::to_string(heads_) + "x" +
                         ShapeString(tokens_, tokens_) + " given " +
                         std::to_string(weights_.size()) + " weights");
  }
  for (std::size_t h = 0; h < heads_; ++h) {
    for (std::size_t i = 0; i < tokens_; ++i) {
      double sum = 0.0;
      for (double w : head_row(h, i)) {
        if (!std::isfinite(w) || w < 0.0) {
          throw InvalidInputError("attention head " + std::to_string(h) +
                                  " row " + std::to_string(i) +
                                  " has a negative or non-finite weight");
        }
        sum += w;
      }
      if (std::abs(sum - 1.0) > row_sum_tolerance) {
        throw InvalidInputError("attention head " + std::to_string(h) + " row " +
                                std::to_string(i) + " sums to " +
                                std::to_string(sum));
      }
    }
  }
}

Matrix AttentionStack::head_max() const {
  Matrix out(tokens_, tokens_, 0.0);
  for (std::size_t h = 0; h < heads_; ++h) {
    for (std::size_t i = 0; i < tokens_; ++i) {
      auto src = head_row(h, i);
      auto dst = out.row(i);
      for (std::size_t j = 0; j < tokens_; ++j) dst[j] = std::max(dst[j], src[j]);
    }
  }
  return out;
}

ReweightedAttention ReweightedAttention::FromStochastic(Matrix weights,
                                                        double row_sum_tolerance) {
  if (weights.rows() != weights.cols() || weights.rows() == 0) {
    throw DimensionError("reweighted attention must be square and non-empty, got " +
                         ShapeString(weights.rows(), weights.cols()));
  }
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    double sum = 0.0;
    for (double w : weights.row(i)) {
      if (!(w >= 0.0 && w <= 1.0)) {
        throw InvalidInputError("reweighted attention row " + std::to_string(i) +
                                " has an entry outside [0,1]");
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > row_sum_tolerance) {
      throw InvalidInputError("reweighted attention row " + std::to_string(i) +
                              " sums to " + std::to_string(sum));
    }
  }
  return ReweightedAttention(std::move(weights));
}

template <typename Tag>
TokenMatrix<Tag>::TokenMatrix(std::size_t tokens, std::size_t dims,
                              std::vector<double> values)
    : TokenMatrix(Matrix(tokens, dims, std::move(values))) {}

template <typename Tag>
TokenMatrix<Tag>::TokenMatrix(Matrix values) : values_(std::move(values)) {
  for (double v : values_.data()) {
    if (!std::isfinite(v)) throw InvalidInputError("token matrix has a non-finite entry");
  }
}

template class TokenMatrix<ValueTag>;
template class TokenMatrix<HiddenTag>;

void RcaConfig::Validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("gamma must be a positive finite number");
  }
  if (floor_theta && !std::isfinite(*floor_theta)) {
    throw ConfigError("floor theta must be finite");
  }
  if (central_value && !std::isfinite(*central_value)) {
    throw ConfigError("central value must be finite");
  }
}

double RcaConfig::theta() const {
  if (!floor_theta) throw ConfigError("floor theta was not set");
  return *floor_theta;
}

double central_value(const AttentionStack& stack) {
  const Matrix amax = stack.head_max();
  const std::size_t n = amax.rows();
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) col_max = std::max(col_max, amax(i, j));
    total += col_max;
  }
  return total / static_cast<double>(n);
}

double reweight(double alpha, double m, double gamma, Scheme scheme) {
  const double delta = alpha - m;
  switch (scheme) {
    case Scheme::kInverseDistance:
      return 1.0 / (1.0 + gamma * std::abs(delta));
    case Scheme::kGaussian:
      return std::exp(-gamma * delta * delta);
  }
  return 0.0;
}

ReweightedAttention renormalize_rows(const Matrix& raw) {
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    throw DimensionError("cannot renormalize a " + ShapeString(raw.rows(), raw.cols()) +
                         " map");
  }
  Matrix out(raw.rows(), raw.cols());
  for (std::size_t i = 0; i < raw.rows(); ++i) {
    auto src = raw.row(i);
    auto dst = out.row(i);
    double sum = 0.0;
    for (std::size_t k = 0; k < src.size(); ++k) {
      dst[k] = std::max(src[k], 0.0);
      sum += dst[k];
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) throw DegenerateRowError(i);
    for (double& w : dst) w /= sum;
  }
  return ReweightedAttention(std::move(out));
}

namespace {

double ResolveCentralValue(const AttentionStack& stack, const RcaConfig& cfg) {
  cfg.Validate();
  return cfg.central_value ? *cfg.central_value : central_value(stack);
}

Matrix ReweightMap(Matrix map, double m, const RcaConfig& cfg) {
  for (std::size_t i = 0; i < map.rows(); ++i) {
    for (double& a : map.row(i)) a = reweight(a, m, cfg.gamma, cfg.scheme);
  }
  return map;
}

}  // namespace

ReweightedAttention apply_rca(const AttentionStack& stack, const RcaConfig& cfg) {
  const double m = ResolveCentralValue(stack, cfg);
  return renormalize_rows(ReweightMap(stack.head_max(), m, cfg));
}

std::vector<ReweightedAttention> apply_rca_per_head(const AttentionStack& stack,
                                                    const RcaConfig& cfg) {
  const double m = ResolveCentralValue(stack, cfg);
  const std::size_t n = stack.tokens();
  std::vector<ReweightedAttention> out;
  out.reserve(stack.heads());
  for (std::size_t h = 0; h < stack.heads(); ++h) {
    auto first = stack.weights().begin() + static_cast<std::ptrdiff_t>(h * n * n);
    Matrix head(n, n, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n * n)));
    out.push_back(renormalize_rows(ReweightMap(std::move(head), m, cfg)));
  }
  return out;
}

HiddenStates aggregate(const ReweightedAttention& attn, const ValueMatrix& values) {
  const std::size_t n = attn.tokens();
  if (values.tokens() != n) {
    throw DimensionError("attention covers " + std::to_string(n) +
                         " tokens but value matrix has " +
                         std::to_string(values.tokens()));
  }
  const std::size_t dv = values.dims();
  Matrix out(n, dv, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto z = out.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = attn(i, j);
      if (a == 0.0) continue;
      auto v = values.row(j);
      for (std::size_t d = 0; d < dv; ++d) z[d] += a * v[d];
    }
  }
  return HiddenStates(std::move(out));
}

HiddenStates floor_states(const HiddenStates& states, double theta) {
  std::vector<double> data = states.matrix().data();
  for (double& z : data) z = std::max(z, theta);
  return HiddenStates(states.tokens(), states.dims(), std::move(data));
}

TokenPartition partition_by_threshold(const ValueMatrix& values, double theta,
                                      std::size_t dim) {
  if (dim >= values.dims()) {
    throw DimensionError("dimension " + std::to_string(dim) + " out of range for " +
                         std::to_string(values.dims()) + " value dims");
  }
  TokenPartition p;
  p.dim = dim;
  p.theta = theta;
  for (std::size_t j = 0; j < values.tokens(); ++j) {
    const double v = values(j, dim);
    if (v < theta) {
      p.below.push_back(j);
      p.v_minus = p.v_minus ? std::min(*p.v_minus, v) : v;
    } else {
      p.at_or_above.push_back(j);
    }
  }
  return p;
}

double flooring_lower_bound(std::span<const double> attn_row,
                            const TokenPartition& partition) {
  const std::size_t n = partition.below.size() + partition.at_or_above.size();
  if (attn_row.size() != n) {
    throw DimensionError("attention row has " + std::to_string(attn_row.size()) +
                         " entries but the partition covers " + std::to_string(n) +
                         " tokens");
  }
  double row_sum = 0.0;
  for (double a : attn_row) row_sum += a;
  if (std::abs(row_sum - 1.0) > kStackRowSumTolerance) {
    throw InvalidInputError("attention row sums to " + std::to_string(row_sum));
  }
  if (partition.below.empty()) return partition.theta;
  if (!partition.v_minus) {
    throw InvalidInputError("partition has subthreshold tokens but no v_minus");
  }
  double penalty = 0.0;
  for (std::size_t j : partition.below) {
    if (j >= n) throw DimensionError("partition index out of range");
    penalty += attn_row[j];
  }
  return partition.theta + (*partition.v_minus - partition.theta) * penalty;
}

std::size_t subthreshold_count(const HiddenStates& states, double theta,
                               std::size_t token) {
  if (token >= states.tokens()) {
    throw DimensionError("token " + std::to_string(token) + " out of range for " +
                         std::to_string(states.tokens()) + " tokens");
  }
  std::size_t count = 0;
  for (double z : states.row(token)) count += z < theta ? 1 : 0;
  return count;
}

}  // namespace rca::core
