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

// Reverse contrast attention numerics.
//
// The transform takes post-softmax multi-head attention A^(h), collapses it to
// the head-max map, reweights every entry by its distance to a central value
// m, and renormalizes rows. Aggregating value vectors with the resulting map
// yields hidden states whose components are bounded below by
//
//   theta + (v_minus - theta) * (attention mass on subthreshold tokens)
//
// for any threshold theta; see flooring_lower_bound().

#ifndef RCA_CORE_ATTENTION_H_
#define RCA_CORE_ATTENTION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rca::core {

// Row-sum tolerance for attention stacks held in 64-bit memory.
inline constexpr double kStackRowSumTolerance = 1e-6;
// Row-sum tolerance for renormalized maps.
inline constexpr double kReweightedRowSumTolerance = 1e-9;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// H x n x n post-softmax attention, one n x n map per head.
class AttentionStack {
 public:
  // Throws DimensionError on shape problems and InvalidInputError when an
  // entry is negative or non-finite, or a row sum is off by more than
  // `row_sum_tolerance`.
  AttentionStack(std::size_t heads, std::size_t tokens,
                 std::vector<double> weights,
                 double row_sum_tolerance = kStackRowSumTolerance);

  std::size_t heads() const { return heads_; }
  std::size_t tokens() const { return tokens_; }
  double at(std::size_t head, std::size_t row, std::size_t col) const {
    return weights_[(head * tokens_ + row) * tokens_ + col];
  }
  std::span<const double> head_row(std::size_t head, std::size_t row) const {
    return {weights_.data() + (head * tokens_ + row) * tokens_, tokens_};
  }
  const std::vector<double>& weights() const { return weights_; }

  // Elementwise maximum over heads.
  Matrix head_max() const;

 private:
  std::size_t heads_;
  std::size_t tokens_;
  std::vector<double> weights_;
};

// Single row-stochastic n x n map produced by RCA.
class ReweightedAttention {
 public:
  // Validates squareness, entries in [0,1] and unit row sums.
  static ReweightedAttention FromStochastic(
      Matrix weights, double row_sum_tolerance = kReweightedRowSumTolerance);

  std::size_t tokens() const { return weights_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return weights_(i, j); }
  std::span<const double> row(std::size_t i) const { return weights_.row(i); }
  const Matrix& matrix() const { return weights_; }

 private:
  explicit ReweightedAttention(Matrix weights) : weights_(std::move(weights)) {}
  friend ReweightedAttention renormalize_rows(const Matrix& raw);

  Matrix weights_;
};

// n x d_v matrix of finite reals, one row per token. The tag keeps value
// vectors and hidden states from being mixed up.
template <typename Tag>
class TokenMatrix {
 public:
  TokenMatrix(std::size_t tokens, std::size_t dims, std::vector<double> values);
  explicit TokenMatrix(Matrix values);

  std::size_t tokens() const { return values_.rows(); }
  std::size_t dims() const { return values_.cols(); }
  double operator()(std::size_t token, std::size_t dim) const {
    return values_(token, dim);
  }
  std::span<const double> row(std::size_t token) const { return values_.row(token); }
  const Matrix& matrix() const { return values_; }

  friend bool operator==(const TokenMatrix&, const TokenMatrix&) = default;

 private:
  Matrix values_;
};

using ValueMatrix = TokenMatrix<struct ValueTag>;
using HiddenStates = TokenMatrix<struct HiddenTag>;

extern template class TokenMatrix<struct ValueTag>;
extern template class TokenMatrix<struct HiddenTag>;

enum class Scheme { kInverseDistance, kGaussian };

struct RcaConfig {
  Scheme scheme = Scheme::kInverseDistance;
  double gamma = 1.0;
  // Floor used by flooring and subthreshold counting. No default exists;
  // theta() throws when it was never set.
  std::optional<double> floor_theta;
  // Explicit m. When empty, m is derived from the stack via central_value().
  std::optional<double> central_value;

  // Throws ConfigError unless gamma > 0 and all set values are finite.
  void Validate() const;
  double theta() const;
};

struct TokenPartition {
  std::vector<std::size_t> below;        // v_j(d) < theta
  std::vector<std::size_t> at_or_above;  // v_j(d) >= theta
  std::size_t dim = 0;
  double theta = 0.0;
  // Minimum of v_j(d) over `below`; empty when `below` is.
  std::optional<double> v_minus;
};

// Mean over key columns of the column maximum of the head-max map:
// m = (1/n) sum_j max_i max_h A^(h)_ij.
double central_value(const AttentionStack& stack);

// 1 / (1 + gamma |alpha - m|) or exp(-gamma (alpha - m)^2).
double reweight(double alpha, double m, double gamma, Scheme scheme);

// Clamps negatives to zero and divides each row by its sum. Throws
// DegenerateRowError for a row with no positive entry.
ReweightedAttention renormalize_rows(const Matrix& raw);

// Head-max, reweight around m, renormalize.
ReweightedAttention apply_rca(const AttentionStack& stack, const RcaConfig& cfg);

// Per-head variant: every head is reweighted around the same m and
// renormalized on its own.
std::vector<ReweightedAttention> apply_rca_per_head(const AttentionStack& stack,
                                                    const RcaConfig& cfg);

// z_i = sum_j attn_ij v_j.
HiddenStates aggregate(const ReweightedAttention& attn, const ValueMatrix& values);

HiddenStates floor_states(const HiddenStates& states, double theta);

TokenPartition partition_by_threshold(const ValueMatrix& values, double theta,
                                      std::size_t dim);

// theta + (v_minus - theta) * sum_{j in below} attn_row[j]; equals theta when
// nothing is below. `attn_row` must sum to 1 within 1e-6 and cover every
// token of the partition.
double flooring_lower_bound(std::span<const double> attn_row,
                            const TokenPartition& partition);

// Number of components of token `token` strictly below theta.
std::size_t subthreshold_count(const HiddenStates& states, double theta,
                               std::size_t token);

}  // namespace rca::core

#endif  // RCA_CORE_ATTENTION_H_
