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

#include "w2lab/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "w2lab/quadrature.hpp"

namespace w2lab {

namespace {

// Lower-tail helpers for 0 <= v <= 1/2; the endpoint v = 0 is the limit.
double h_lower(double v) {
  if (v <= 0.0) return 0.0;
  return density_quantile_h(UnitProb(v));
}

// G2(v) = int_0^v (Phi^{-1})^2 = v - Phi^{-1}(v) h(v).
double g2_lower(double v) {
  if (v <= 0.0) return 0.0;
  const UnitProb p(v);
  return v - std_normal_quantile(p) * density_quantile_h(p);
}

// h(a) - h(b) for lower-tail a < b <= 1/2, i.e. -int_a^b Phi^{-1}, written
// as phi(qb) expm1((qb - qa)(qb + qa)/2) to avoid the difference of two
// nearly equal densities.
double h_increment(double a, double b) {
  if (a <= 0.0) return -h_lower(b);
  const double qa = std_normal_quantile(UnitProb(a));
  const double qb = b == 0.5 ? 0.0 : std_normal_quantile(UnitProb(b));
  return std_normal_pdf(qb) * std::expm1(0.5 * (qb - qa) * (qb + qa));
}

double g2_at(UnitProb u) {
  if (u.upper_half()) return 1.0 - g2_lower(u.complement());
  return g2_lower(u.value());
}

double width(UnitProb a, UnitProb b) {
  if (a.upper_half() && b.upper_half()) return a.complement() - b.complement();
  return b.value() - a.value();
}

void check_order(UnitProb a, UnitProb b) {
  if (b.value() < a.value() ||
      (a.upper_half() && b.upper_half() && b.complement() > a.complement())) {
    throw std::invalid_argument("quantile integral: reversed bounds");
  }
}

}  // namespace

SortedSample SortedSample::from_unsorted(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("SortedSample: empty sample");
  for (double x : values) {
    if (!std::isfinite(x)) throw std::invalid_argument("SortedSample: non-finite value");
  }
  std::stable_sort(values.begin(), values.end());
  return SortedSample(std::move(values));
}

SortedSample SortedSample::from_sorted(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("SortedSample: empty sample");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument("SortedSample: non-finite value");
    }
    if (i > 0 && values[i] < values[i - 1]) {
      throw std::invalid_argument("SortedSample: values are not nondecreasing");
    }
  }
  return SortedSample(std::move(values));
}

double SortedSample::quantile(UnitProb u) const {
  const double n = static_cast<double>(values_.size());
  auto rank = static_cast<std::size_t>(std::ceil(n * u.value()));
  rank = std::clamp<std::size_t>(rank, 1, values_.size());
  return values_[rank - 1];
}

double SortedSample::mean() const {
  CompensatedSum sum;
  for (double x : values_) sum.add(x);
  return sum.value() / static_cast<double>(values_.size());
}

SortedSample SortedSample::negated() const {
  std::vector<double> out(values_.rbegin(), values_.rend());
  for (double& x : out) x = -x;
  return SortedSample(std::move(out));
}

SortedSample SortedSample::affine(double mu, double sigma) const {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw std::invalid_argument("SortedSample::affine: requires sigma > 0");
  }
  std::vector<double> out(values_);
  for (double& x : out) x = mu + sigma * x;
  return SortedSample(std::move(out));
}

void GaussianReference::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
    throw std::invalid_argument("GaussianReference: requires finite mu and sigma > 0");
  }
}

double quantile_integral(UnitProb a, UnitProb b, const GaussianReference& ref) {
  ref.validate();
  check_order(a, b);
  // int_a^b Phi^{-1} = h(a) - h(b)
  const double h_diff = density_quantile_h(a) - density_quantile_h(b);
  return ref.mu * width(a, b) + ref.sigma * h_diff;
}

double quantile_sq_integral(UnitProb a, UnitProb b, const GaussianReference& ref) {
  ref.validate();
  check_order(a, b);
  double g2_diff;
  if (a.upper_half() && b.upper_half()) {
    g2_diff = g2_lower(a.complement()) - g2_lower(b.complement());
  } else {
    g2_diff = g2_at(b) - g2_at(a);
  }
  const double h_diff = density_quantile_h(a) - density_quantile_h(b);
  return ref.mu * ref.mu * width(a, b) + 2.0 * ref.mu * ref.sigma * h_diff +
         ref.sigma * ref.sigma * g2_diff;
}

QuantileCellTable::QuantileCellTable(std::size_t n) : means_(n, 0.0) {
  if (n == 0) throw std::invalid_argument("QuantileCellTable: n must be positive");
  const double dn = static_cast<double>(n);
  // Lower half by direct evaluation; the upper half by antisymmetry so that
  // negating a sample leaves the distance unchanged to rounding.
  const std::size_t half = n / 2;
  for (std::size_t i = 1; i <= half; ++i) {
    const double a = static_cast<double>(i - 1) / dn;
    const double b = static_cast<double>(i) / dn;
    means_[i - 1] = dn * h_increment(a, b);
  }
  for (std::size_t i = 1; i <= half; ++i) means_[n - i] = -means_[i - 1];
  if (n % 2 == 1) means_[half] = 0.0;

  CompensatedSum sq;
  for (double m : means_) sq.add(m * m);
  within_ = 1.0 - sq.value() / dn;
}

double w2sq_vs_gaussian(const SortedSample& s, const GaussianReference& ref) {
  return w2sq_vs_gaussian(s, QuantileCellTable(s.size()), ref);
}

double w2sq_vs_gaussian(const SortedSample& s, const QuantileCellTable& table,
                        const GaussianReference& ref) {
  ref.validate();
  if (table.n() != s.size()) {
    throw std::invalid_argument("w2sq_vs_gaussian: table size does not match sample");
  }
  const auto z = s.values();
  const auto m = table.means();
  CompensatedSum sum;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = (z[i] - ref.mu) - ref.sigma * m[i];
    sum.add(d * d);
  }
  const double total = sum.value() / static_cast<double>(z.size()) +
                       ref.sigma * ref.sigma * table.within_cell_variance();
  return std::max(total, 0.0);
}

double w2sq_two_sample(const SortedSample& sx, const SortedSample& sy) {
  if (sx.size() != sy.size()) {
    throw std::invalid_argument("w2sq_two_sample: sample sizes differ");
  }
  const auto x = sx.values();
  const auto y = sy.values();
  CompensatedSum sum;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum.add(d * d);
  }
  return sum.value() / static_cast<double>(x.size());
}

double upper_piece_integral(const SortedSample& s, double v_lo, double v_hi) {
  if (!(0.0 <= v_lo && v_lo <= v_hi && v_hi <= 0.5)) {
    throw std::invalid_argument("upper_piece_integral: need 0 <= v_lo <= v_hi <= 1/2");
  }
  if (v_lo == v_hi) return 0.0;
  const std::size_t n = s.size();
  const double dn = static_cast<double>(n);
  // Cell j (0-based) covers complements [j/n, (j+1)/n) and carries Z_{n-j}.
  auto first = static_cast<std::size_t>(std::floor(v_lo * dn));
  CompensatedSum sum;
  for (std::size_t j = first; j < n; ++j) {
    const double cell_lo = static_cast<double>(j) / dn;
    if (cell_lo >= v_hi) break;
    const double lo = std::max(v_lo, cell_lo);
    const double hi = std::min(v_hi, static_cast<double>(j + 1) / dn);
    if (!(lo < hi)) continue;
    const double z = s.order_stat(n - j);
    // In the complement variable Phi^{-1}(1 - v) = -Phi^{-1}(v), so
    // int_lo^hi Phi^{-1}(1-v) dv = h(hi) - h(lo) and the square integrates
    // to G2(hi) - G2(lo).
    const double lin = -h_increment(lo, hi);
    const double quad = g2_lower(hi) - g2_lower(lo);
    sum.add(z * z * (hi - lo) - 2.0 * z * lin + quad);
  }
  return std::max(sum.value(), 0.0);
}

W2Decomposition tail_decomposition(const SortedSample& s, double C, double theta,
                                   double gamma) {
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw std::invalid_argument("tail_decomposition: C must be positive");
  }
  if (!(theta > 1.0 && theta <= 2.0)) {
    throw std::invalid_argument("tail_decomposition: theta must lie in (1, 2]");
  }
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("tail_decomposition: gamma must exceed 1");
  }
  const std::size_t n = s.size();
  if (n < 3) throw std::invalid_argument("tail_decomposition: n must be at least 3");
  const double dn = static_cast<double>(n);
  const double log_n = std::log(dn);
  const auto K = static_cast<std::size_t>(std::floor(C * std::pow(log_n, theta)));
  if (K < 1 || 2 * K >= n) {
    throw std::invalid_argument(
        "tail_decomposition: floor(C (log n)^theta) must lie in [1, n/2)");
  }

  W2Decomposition out;
  out.C = C;
  out.theta = theta;
  out.gamma = gamma;
  out.n = n;
  out.cut_count = K;
  const double v_a = 1.0 / (dn * std::pow(log_n, gamma));
  const double v_b = 1.0 / dn;
  const double v_c = static_cast<double>(K) / dn;
  out.a_n = upper_piece_integral(s, 0.0, v_a);
  out.b_n = upper_piece_integral(s, v_a, v_b);
  out.c_n = upper_piece_integral(s, v_b, v_c);
  out.d_n = upper_piece_integral(s, v_c, 0.5);
  out.half_total = upper_piece_integral(s, 0.0, 0.5);
  return out;
}

}  // namespace w2lab
