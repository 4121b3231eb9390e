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

// Small distributional tools: two-sample Kolmogorov-Smirnov and sample
// quantiles.

#ifndef W2LAB_STATS_HPP_
#define W2LAB_STATS_HPP_

#include <span>

namespace w2lab {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// sup |F_a - F_b| with the asymptotic Kolmogorov p-value (Stephens'
/// effective-size correction). Both samples need at least 25 values and
/// must not be constant.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_survival(double lambda);

/// Linear-interpolation sample quantile (R type 7). Input need not be sorted.
double sample_quantile(std::span<const double> x, double p);

}  // namespace w2lab

#endif  // W2LAB_STATS_HPP_
