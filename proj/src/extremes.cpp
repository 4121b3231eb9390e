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

#include "w2lab/extremes.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "w2lab/parallel.hpp"
#include "w2lab/quadrature.hpp"

namespace w2lab {

double HarmonicSums::expansion_residual() const {
  if (k == 0) return 0.0;
  const double dk = static_cast<double>(k);
  return s1 - gamma0 - std::log(dk) - 0.5 / dk;
}

HarmonicSums harmonic_sums(std::size_t k) {
  HarmonicSums out;
  out.k = k;
  // smallest terms first
  CompensatedSum s1;
  CompensatedSum s2;
  for (std::size_t j = k; j >= 1; --j) {
    const double dj = static_cast<double>(j);
    s1.add(1.0 / dj);
    s2.add(1.0 / (dj * dj));
  }
  out.s1 = s1.value();
  out.s2 = s2.value();
  return out;
}

std::string_view to_string(IndexVariant v) {
  return v == IndexVariant::kAsStated ? "as_stated" : "shifted";
}

IndexVariant index_variant_from_string(std::string_view s) {
  if (s == "as_stated") return IndexVariant::kAsStated;
  if (s == "shifted") return IndexVariant::kShifted;
  throw std::invalid_argument("unknown index variant: " + std::string(s));
}

namespace {

void check_range(std::size_t n, std::size_t k, const ExtremeRange& range) {
  if (n < 3) throw std::invalid_argument("extreme moments: n must be at least 3");
  if (!(range.C > 0.0) || !(range.theta > 0.0 && range.theta <= 2.0)) {
    throw std::invalid_argument("extreme moments: need C > 0 and 0 < theta <= 2");
  }
  const double log_n = std::log(static_cast<double>(n));
  if (static_cast<double>(k) > range.C * std::pow(log_n, range.theta) || k >= n) {
    throw std::invalid_argument("extreme moments: k = " + std::to_string(k) +
                                " exceeds C (log n)^theta");
  }
}

std::size_t harmonic_index(std::size_t k, IndexVariant v) {
  return v == IndexVariant::kAsStated ? k + 1 : k;
}

ExtremeMoment base(std::size_t n, std::size_t k, IndexVariant v) {
  ExtremeMoment out;
  out.n = n;
  out.k = k;
  out.variant = v;
  const double log_n = std::log(static_cast<double>(n));
  const double ll = std::log(log_n);
  out.mean_error_order = ll * ll / std::pow(log_n, 1.5);
  out.var_error_order = 1.0 / (log_n * log_n);
  return out;
}

}  // namespace

ExtremeMoment extreme_mean(std::size_t n, std::size_t k, IndexVariant variant,
                           const ExtremeRange& range) {
  check_range(n, k, range);
  ExtremeMoment out = base(n, k, variant);
  const HarmonicSums h = harmonic_sums(harmonic_index(k, variant));
  const double log_n = std::log(static_cast<double>(n));
  out.mean_pred = std::sqrt(2.0 * log_n) -
                  (std::log(log_n) + 2.0 * (h.s1 - h.gamma0) + std::log(4.0 * kPi)) /
                      std::sqrt(8.0 * log_n);
  out.var_pred = extreme_var(n, k, variant, range).var_pred;
  return out;
}

ExtremeMoment extreme_var(std::size_t n, std::size_t k, IndexVariant variant,
                          const ExtremeRange& range) {
  check_range(n, k, range);
  ExtremeMoment out = base(n, k, variant);
  const HarmonicSums h = harmonic_sums(harmonic_index(k, variant));
  const double log_n = std::log(static_cast<double>(n));
  out.var_pred = (kPi * kPi / 6.0 - h.s2) / (2.0 * log_n);
  return out;
}

double draw_upper_order_stat(std::size_t n, std::size_t k, RandomStream& rng) {
  if (n == 0 || k >= n) {
    throw std::invalid_argument("draw_upper_order_stat: need 0 <= k < n");
  }
  // 1 - Phi(Z_{n-k}) is the (k+1)-th smallest of n uniforms.
  const double g1 = rng.gamma(static_cast<double>(k + 1));
  const double g2 = rng.gamma(static_cast<double>(n - k));
  const double b = g1 / (g1 + g2);
  const double c = g2 / (g1 + g2);
  return -std_normal_quantile(b <= 0.5 ? UnitProb(b) : UnitProb::from_complement(c));
}

MomentEstimate sample_extreme(std::size_t n, std::size_t k, std::size_t reps,
                              std::uint64_t seed, unsigned workers) {
  if (reps < 2) throw std::invalid_argument("sample_extreme: reps must be at least 2");
  std::vector<double> draws(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    RandomStream rng(seed, StreamFamily::kExtremes, r);
    draws[r] = draw_upper_order_stat(n, k, rng);
  });
  return summarize(draws);
}

double upper_order_stat_cdf_binomial(std::size_t n, std::size_t k, double z) {
  if (n == 0 || k >= n) throw std::invalid_argument("order statistic cdf: need k < n");
  const double p = std_normal_cdf(z);
  const double q = std_normal_sf(z);
  if (q == 0.0) return 1.0;
  if (p == 0.0) return 0.0;
  const double dn = static_cast<double>(n);
  const double lp = std::log(p);
  const double lq = std::log(q);
  // sum_{j = n-k}^{n} C(n, j) p^j q^(n-j): at most k of the n exceed z.
  CompensatedSum sum;
  for (std::size_t m = 0; m <= k; ++m) {
    const double dm = static_cast<double>(m);
    const double log_choose =
        std::lgamma(dn + 1.0) - std::lgamma(dm + 1.0) - std::lgamma(dn - dm + 1.0);
    sum.add(std::exp(log_choose + (dn - dm) * lp + dm * lq));
  }
  return std::min(sum.value(), 1.0);
}

double upper_order_stat_cdf_beta(std::size_t n, std::size_t k, double z) {
  if (n == 0 || k >= n) throw std::invalid_argument("order statistic cdf: need k < n");
  const double x = std_normal_sf(z);
  if (x == 0.0) return 1.0;
  return boost::math::ibetac(static_cast<double>(k + 1), static_cast<double>(n - k), x);
}

double uniform_quantile_central_moment(std::size_t n, UnitProb u, int p) {
  if (n == 0) throw std::invalid_argument("uniform_quantile_central_moment: n = 0");
  if (p != 2 && p != 4) {
    throw std::invalid_argument("uniform_quantile_central_moment: p must be 2 or 4");
  }
  const double dn = static_cast<double>(n);
  auto r = static_cast<std::size_t>(std::ceil(dn * u.value()));
  r = std::clamp<std::size_t>(r, 1, n);
  const double a = static_cast<double>(r);
  const double b = dn - a + 1.0;
  const double s = a + b;
  const double mean = a / s;
  // offset of the Beta mean from u, formed without cancellation in the
  // upper half: mean - u = (1 - u) - b / s
  const double delta =
      u.upper_half() ? u.complement() - b / s : mean - u.value();
  const double mu2 = a * b / (s * s * (s + 1.0));
  const double uu = u.value() * u.complement();
  if (p == 2) return dn * (mu2 + delta * delta) / uu;
  const double mu3 = 2.0 * (b - a) * a * b / (s * s * s * (s + 1.0) * (s + 2.0));
  const double mu4 = 3.0 * a * b * (a * b * (s - 6.0) + 2.0 * s * s) /
                     (s * s * s * s * (s + 1.0) * (s + 2.0) * (s + 3.0));
  const double d2 = delta * delta;
  const double m4 = mu4 + 4.0 * mu3 * delta + 6.0 * mu2 * d2 + d2 * d2;
  return dn * dn * m4 / (uu * uu);
}

}  // namespace w2lab
