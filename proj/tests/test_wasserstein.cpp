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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "w2lab/quadrature.hpp"
#include "w2lab/rng.hpp"
#include "w2lab/wasserstein.hpp"

using namespace w2lab;

namespace {

SortedSample normal_sample(std::size_t n, std::uint64_t stream) {
  RandomStream r(77, StreamFamily::kTesting, stream);
  std::vector<double> x(n);
  for (double& v : x) v = r.normal();
  return SortedSample::from_unsorted(std::move(x));
}

}  // namespace

TEST(SortedSample, Validation) {
  EXPECT_THROW(SortedSample::from_unsorted({}), std::invalid_argument);
  EXPECT_THROW(SortedSample::from_unsorted({1.0, NAN}), std::invalid_argument);
  EXPECT_THROW(SortedSample::from_sorted({2.0, 1.0}), std::invalid_argument);
  const auto s = SortedSample::from_unsorted({3.0, 1.0, 2.0});
  EXPECT_EQ(s.order_stat(1), 1.0);
  EXPECT_EQ(s.order_stat(3), 3.0);
  EXPECT_EQ(s.quantile(UnitProb(0.34)), 2.0);
  EXPECT_EQ(s.quantile(UnitProb(1.0 / 3.0)), 1.0);
  EXPECT_EQ(s.mean(), 2.0);
  EXPECT_EQ(s.negated().order_stat(1), -3.0);
  EXPECT_THROW(s.affine(0.0, 0.0), std::invalid_argument);
}

TEST(QuantileIntegrals, AgainstQuadrature) {
  const GaussianReference ref{0.3, 1.7};
  for (auto [a, b] : std::vector<std::pair<double, double>>{
           {1e-9, 0.2}, {0.1, 0.9}, {0.4, 0.6}, {0.7, 1 - 1e-9}}) {
    QuadratureOptions o{1e-15, 1e-13, 4, 4000};
    const double xa = std_normal_quantile(a), xb = std_normal_quantile(b);
    auto f1 = [&](double x) { return (ref.mu + ref.sigma * x) * std_normal_pdf(x); };
    auto f2 = [&](double x) {
      const double y = ref.mu + ref.sigma * x;
      return y * y * std_normal_pdf(x);
    };
    EXPECT_NEAR(quantile_integral(UnitProb(a), UnitProb(b), ref),
                integrate_adaptive(f1, xa, xb, o).value, 1e-12);
    EXPECT_NEAR(quantile_sq_integral(UnitProb(a), UnitProb(b), ref),
                integrate_adaptive(f2, xa, xb, o).value, 1e-12);
  }
  EXPECT_THROW(quantile_integral(UnitProb(0.6), UnitProb(0.4), ref), std::invalid_argument);
}

TEST(CellTable, Properties) {
  for (std::size_t n : {1u, 2u, 7u, 64u, 1000u}) {
    const QuantileCellTable t(n);
    double sum = 0;
    for (double m : t.means()) sum += m;
    EXPECT_NEAR(sum, 0.0, 1e-12);
    for (std::size_t i = 1; i < n; ++i) EXPECT_LT(t.means()[i - 1], t.means()[i]);
    EXPECT_GT(t.within_cell_variance(), 0.0);
    EXPECT_LE(t.within_cell_variance(), 1.0);
  }
  EXPECT_EQ(QuantileCellTable(1).within_cell_variance(), 1.0);
  EXPECT_THROW(QuantileCellTable(0), std::invalid_argument);
}

TEST(W2, SinglePointClosedForm) {
  for (double x : {-3.0, 0.0, 0.25, 7.0}) {
    const auto s = SortedSample::from_sorted({x});
    EXPECT_NEAR(w2sq_vs_gaussian(s, GaussianReference::standard()), x * x + 1.0,
                1e-12 * (x * x + 1.0));
  }
}

TEST(W2, MatchesQuadratureOracle) {
  for (std::size_t n : {1u, 2u, 5u, 17u, 64u}) {
    const auto s = normal_sample(n, n);
    for (const GaussianReference ref : {GaussianReference{0, 1}, GaussianReference{-0.4, 2.5}}) {
      const double got = w2sq_vs_gaussian(s, ref);
      const double want = oracle::w2sq_quadrature(s, ref);
      EXPECT_NEAR(got, want, 1e-10 * want) << n;
    }
  }
}

TEST(W2, NegationAndScaling) {
  for (std::size_t n : {3u, 10u, 501u}) {
    const auto s = normal_sample(n, 100 + n);
    const double base = w2sq_vs_gaussian(s, GaussianReference::standard());
    EXPECT_NEAR(w2sq_vs_gaussian(s.negated(), GaussianReference::standard()), base,
                1e-12 * base);
    const double mu = 1.5, sigma = 3.0;
    EXPECT_NEAR(w2sq_vs_gaussian(s.affine(mu, sigma), GaussianReference{mu, sigma}),
                sigma * sigma * base, 1e-12 * sigma * sigma * base);
  }
}

TEST(W2, TwoSample) {
  const auto a = normal_sample(50, 1);
  const auto b = normal_sample(50, 2);
  EXPECT_EQ(w2sq_two_sample(a, a), 0.0);
  EXPECT_NEAR(w2sq_two_sample(a, b), w2sq_two_sample(b, a), 0.0);
  EXPECT_THROW(w2sq_two_sample(a, normal_sample(49, 3)), std::invalid_argument);
  // a rigid shift by c moves every order statistic by c
  std::vector<double> shifted(a.values().begin(), a.values().end());
  for (double& x : shifted) x += 0.5;
  const auto c = SortedSample::from_sorted(shifted);
  EXPECT_NEAR(w2sq_two_sample(a, c), 0.25, 1e-14);
}

TEST(Decomposition, PiecesPartitionUpperHalf) {
  const auto s = normal_sample(5000, 9);
  const auto d = tail_decomposition(s, 1.0, 2.0, 2.0);
  EXPECT_EQ(d.cut_count, static_cast<std::size_t>(std::floor(std::pow(std::log(5000.0), 2))));
  const double sum = d.a_n + d.b_n + d.c_n + d.d_n;
  EXPECT_NEAR(sum, d.half_total, 1e-12 * d.half_total);
  // the two halves add up to the full distance
  const double lower = tail_decomposition(s.negated(), 1.0, 2.0, 2.0).half_total;
  const double full = w2sq_vs_gaussian(s, GaussianReference::standard());
  EXPECT_NEAR(d.half_total + lower, full, 1e-11 * full);
  for (double v : {d.a_n, d.b_n, d.c_n, d.d_n}) EXPECT_GE(v, 0.0);
}

TEST(Decomposition, RejectsBadParameters) {
  const auto s = normal_sample(100, 1);
  EXPECT_THROW(tail_decomposition(s, 0.0, 2.0, 2.0), std::invalid_argument);
  EXPECT_THROW(tail_decomposition(s, 1.0, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(tail_decomposition(s, 1.0, 2.0, 1.0), std::invalid_argument);
  // K = floor(21.2) is fine at n = 100; C = 3 pushes K past n/2
  EXPECT_NO_THROW(tail_decomposition(s, 1.0, 2.0, 2.0));
  EXPECT_THROW(tail_decomposition(s, 3.0, 2.0, 2.0), std::invalid_argument);
}
