// Copyright 2026 The w2lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact quadratic Wasserstein distances in one dimension.
//
// The empirical quantile function of a sorted sample Z_1 <= ... <= Z_n is the
// step function u -> Z_ceil(nu). Against a Gaussian reference the squared
// distance is a sum over the n cells ((i-1)/n, i/n] of integrals of
// (Z_i - mu - sigma Phi^{-1}(u))^2, each of which is closed-form through the
// antiderivatives of Phi^{-1} and (Phi^{-1})^2.

#ifndef W2LAB_WASSERSTEIN_HPP_
#define W2LAB_WASSERSTEIN_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "w2lab/gaussian.hpp"

namespace w2lab {

class SortedSample {
 public:
  /// Sorts (stably) and validates. Throws on empty or non-finite input.
  static SortedSample from_unsorted(std::vector<double> values);
  /// Validates that the values are already nondecreasing and finite.
  static SortedSample from_sorted(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  /// Order statistic Z_i, 1-based.
  double order_stat(std::size_t i) const { return values_.at(i - 1); }
  /// Empirical quantile Z_ceil(n u).
  double quantile(UnitProb u) const;
  double mean() const;

  /// The sample -x, re-sorted.
  SortedSample negated() const;
  /// The sample mu + sigma x for sigma > 0.
  SortedSample affine(double mu, double sigma) const;

 private:
  explicit SortedSample(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

struct GaussianReference {
  double mu = 0.0;
  double sigma = 1.0;

  static GaussianReference standard() { return {}; }
  /// Throws unless sigma > 0 and both fields are finite.
  void validate() const;
};

/// int_a^b (mu + sigma Phi^{-1}(u)) du for 0 < a <= b < 1.
double quantile_integral(UnitProb a, UnitProb b, const GaussianReference& ref);
/// int_a^b (mu + sigma Phi^{-1}(u))^2 du for 0 < a <= b < 1.
double quantile_sq_integral(UnitProb a, UnitProb b, const GaussianReference& ref);

/// Per-cell constants of the standard quantile function for a fixed n.
///
/// mean(i) = n * int_{(i-1)/n}^{i/n} Phi^{-1}, and within_cell_variance()
/// sums int_cell (Phi^{-1} - mean(i))^2 over all cells. With these,
/// W2^2 = (1/n) sum_i (Z_i - mu - sigma mean(i))^2 + sigma^2 within.
class QuantileCellTable {
 public:
  explicit QuantileCellTable(std::size_t n);

  std::size_t n() const { return means_.size(); }
  std::span<const double> means() const { return means_; }
  double within_cell_variance() const { return within_; }

 private:
  std::vector<double> means_;
  double within_ = 0.0;
};

double w2sq_vs_gaussian(const SortedSample& s, const GaussianReference& ref);
/// Same value, reusing a precomputed table (table.n() must equal s.size()).
double w2sq_vs_gaussian(const SortedSample& s, const QuantileCellTable& table,
                        const GaussianReference& ref = GaussianReference::standard());

/// (1/n) sum_i (X_(i) - Y_(i))^2; sizes must match.
double w2sq_two_sample(const SortedSample& sx, const SortedSample& sy);

struct W2Decomposition {
  double a_n = 0.0;  // [1 - 1/(n (log n)^gamma), 1], constant Z_n
  double b_n = 0.0;  // [1 - 1/n, 1 - 1/(n (log n)^gamma)], constant Z_n
  double c_n = 0.0;  // [1 - K/n, 1 - 1/n], cells of Z_{n-k}, k = 1..K-1
  double d_n = 0.0;  // [1/2, 1 - K/n]
  double C = 0.0;
  double theta = 0.0;
  double gamma = 0.0;
  std::size_t n = 0;
  std::size_t cut_count = 0;  // K = floor(C (log n)^theta)
  double half_total = 0.0;    // int_{1/2}^1 (F_n^{-1} - Phi^{-1})^2, computed directly
};

/// Splits the upper half of the standard-reference integral into the four
/// tail/bulk pieces. Requires C > 0, 1 < theta <= 2, gamma > 1, n >= 3 and
/// 1 <= K < n/2.
W2Decomposition tail_decomposition(const SortedSample& s, double C, double theta,
                                   double gamma);

/// int over [1 - v_hi, 1 - v_lo] of (F_n^{-1}(u) - Phi^{-1}(u))^2 du, with the
/// bounds given through their complements 0 <= v_lo <= v_hi <= 1/2.
double upper_piece_integral(const SortedSample& s, double v_lo, double v_hi);

}  // namespace w2lab

#endif  // W2LAB_WASSERSTEIN_HPP_
