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

// Upper order statistics of Gaussian samples: Cramer-type moment formulas,
// exact sampling through the Beta representation, and closed-form moments
// of the uniform quantile process.

#ifndef W2LAB_EXTREMES_HPP_
#define W2LAB_EXTREMES_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "w2lab/gaussian.hpp"
#include "w2lab/rng.hpp"

namespace w2lab {

struct HarmonicSums {
  std::size_t k = 0;
  double s1 = 0.0;  // sum_{j<=k} 1/j
  double s2 = 0.0;  // sum_{j<=k} 1/j^2
  double gamma0 = kEulerGamma;

  /// s1 - gamma0 - log k - 1/(2k); O(1/k^2). Zero for k = 0 by convention.
  double expansion_residual() const;
};

HarmonicSums harmonic_sums(std::size_t k);

/// Which harmonic index enters the moment formulas for Z_{n-k}: s_{k+1},
/// or s_k as the digamma identity E log Gamma(k+1) gives.
enum class IndexVariant { kAsStated, kShifted };

std::string_view to_string(IndexVariant v);
IndexVariant index_variant_from_string(std::string_view s);

struct ExtremeMoment {
  std::size_t n = 0;
  std::size_t k = 0;
  IndexVariant variant = IndexVariant::kShifted;
  double mean_pred = 0.0;
  double var_pred = 0.0;
  double mean_error_order = 0.0;  // (log log n)^2 / (log n)^{3/2}
  double var_error_order = 0.0;   // 1 / (log n)^2
};

/// Admissible range for k: k <= C (log n)^theta with theta <= 2.
struct ExtremeRange {
  double C = 1.0;
  double theta = 2.0;
};

/// sqrt(2 log n) - (log log n + 2 (s1 - gamma0) + log 4 pi) / sqrt(8 log n).
ExtremeMoment extreme_mean(std::size_t n, std::size_t k, IndexVariant variant,
                           const ExtremeRange& range = {});
/// (pi^2/6 - s2) / (2 log n).
ExtremeMoment extreme_var(std::size_t n, std::size_t k, IndexVariant variant,
                          const ExtremeRange& range = {});

struct MomentEstimate {
  double mean = 0.0;
  double se_mean = 0.0;
  double variance = 0.0;
  double se_variance = 0.0;
  std::size_t count = 0;
};

/// Builds the estimate from raw draws (unbiased variance; the variance
/// standard error uses the sample fourth central moment).
template <typename Range>
MomentEstimate summarize(const Range& draws);

/// One exact draw of Z_{n-k}: Phi^{-1}(1 - B) with B ~ Beta(k+1, n-k).
double draw_upper_order_stat(std::size_t n, std::size_t k, RandomStream& rng);

/// reps draws of Z_{n-k}, replication r using stream r of the extremes
/// family; deterministic given (seed, reps) for any worker count.
MomentEstimate sample_extreme(std::size_t n, std::size_t k, std::size_t reps,
                              std::uint64_t seed, unsigned workers = 1);

/// P(Z_{n-k} <= z) from the binomial tail: at least n-k of the n
/// observations fall below z.
double upper_order_stat_cdf_binomial(std::size_t n, std::size_t k, double z);
/// P(Z_{n-k} <= z) = P(B >= 1 - Phi(z)) for B ~ Beta(k+1, n-k).
double upper_order_stat_cdf_beta(std::size_t n, std::size_t k, double z);

/// E[(sqrt(n) (U_(r) - u))^p] / (u (1 - u))^{p/2} with r = ceil(n u),
/// U_(r) ~ Beta(r, n - r + 1); p must be 2 or 4.
double uniform_quantile_central_moment(std::size_t n, UnitProb u, int p);

}  // namespace w2lab

#include "w2lab/detail/summarize.hpp"

#endif  // W2LAB_EXTREMES_HPP_
