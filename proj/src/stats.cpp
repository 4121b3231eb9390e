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

#include "w2lab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace w2lab {

namespace {

bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

std::vector<double> sorted_finite(std::span<const double> x, const char* who) {
  std::vector<double> out(x.begin(), x.end());
  for (double v : out) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": non-finite value");
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // series is 1 to double precision here
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 25 || b.size() < 25) {
    throw std::invalid_argument("ks_two_sample: each sample needs at least 25 values");
  }
  if (is_constant(a) || is_constant(b)) {
    throw std::invalid_argument("ks_two_sample: constant sample");
  }
  const auto x = sorted_finite(a, "ks_two_sample");
  const auto y = sorted_finite(b, "ks_two_sample");
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult out;
  out.statistic = d;
  const double ne = std::sqrt(na * nb / (na + nb));
  out.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
  return out;
}

double sample_quantile(std::span<const double> x, double p) {
  if (x.empty()) throw std::invalid_argument("sample_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_quantile: p outside [0, 1]");
  auto s = sorted_finite(x, "sample_quantile");
  const double h = (static_cast<double>(s.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace w2lab
