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

#include <boost/math/distributions/gamma.hpp>

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "w2lab/gaussian.hpp"
#include "w2lab/parallel.hpp"
#include "w2lab/quadrature.hpp"
#include "w2lab/rng.hpp"
#include "w2lab/stats.hpp"

using namespace w2lab;

TEST(Quadrature, KnownIntegrals) {
  auto r = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-14);
  r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                         {1e-10, 1e-10, 4, 4000});
  EXPECT_NEAR(r.value, 2.0, 1e-8);
  r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, kPi);
  EXPECT_NEAR(r.value, 2.0, 1e-14);
  EXPECT_EQ(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0).value, 0.0);
  EXPECT_THROW(integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0), std::invalid_argument);
}

TEST(Quadrature, ReportsFailure) {
  QuadratureOptions tight{1e-15, 1e-15, 1, 20};
  EXPECT_THROW(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, tight),
               QuadratureFailure);
  EXPECT_THROW(integrate_adaptive([](double) { return NAN; }, 0.0, 1.0), QuadratureFailure);
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-13, 1e-26);
}

TEST(Philox, KnownAnswers) {
  // Random123 known-answer vectors for philox4x32_10
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxBlock{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
            (PhiloxBlock{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}),
            (PhiloxBlock{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RandomStream, DeterministicAndSeparated) {
  RandomStream a(42, StreamFamily::kTesting, 7);
  RandomStream b(42, StreamFamily::kTesting, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  // different streams, families and seeds never share counter/key pairs
  RandomStream c(42, StreamFamily::kTesting, 8);
  RandomStream d(42, StreamFamily::kOneSample, 7);
  RandomStream e(43, StreamFamily::kTesting, 7);
  RandomStream a2(42, StreamFamily::kTesting, 7);
  const auto x = a2.next_u64();
  EXPECT_NE(x, c.next_u64());
  EXPECT_NE(x, d.next_u64());
  EXPECT_NE(x, e.next_u64());
}

TEST(RandomStream, CountersOfDisjointStreamsNeverCollide) {
  // stream index occupies the upper counter words, the block index the
  // lower ones, so distinct (stream, block) pairs give distinct counters
  std::set<PhiloxBlock> seen;
  for (std::uint64_t s = 0; s < 64; ++s) {
    RandomStream r(1, StreamFamily::kTesting, s);
    for (int i = 0; i < 50; ++i) {
      EXPECT_TRUE(seen.insert(r.next_counter()).second);
      r.next_u64();
      r.next_u64();
    }
  }
  RandomStream big(1, StreamFamily::kTesting, (1ull << 32) + 3);
  EXPECT_EQ(big.next_counter()[2], 3u);
  EXPECT_EQ(big.next_counter()[3], 1u);
}

TEST(RandomStream, UniformAndNormalMoments) {
  RandomStream r(2026, StreamFamily::kTesting, 0);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, se = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
    se += r.exponential();
  }
  EXPECT_NEAR(su / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sn / n, 0.0, 4 * std::sqrt(1.0 / n));
  EXPECT_NEAR(sn2 / n, 1.0, 4 * std::sqrt(2.0 / n));
  EXPECT_NEAR(se / n, 1.0, 4 * std::sqrt(1.0 / n));
}

TEST(RandomStream, GammaMatchesCdf) {
  for (double shape : {0.4, 1.0, 3.0, 1e6}) {
    RandomStream r(5, StreamFamily::kTesting, static_cast<std::uint64_t>(shape * 10));
    std::vector<double> draws(4000);
    for (double& g : draws) g = r.gamma(shape);
    // KS distance against the exact cdf
    std::sort(draws.begin(), draws.end());
    const boost::math::gamma_distribution<> dist(shape);
    double d = 0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
      const double f = boost::math::cdf(dist, draws[i]);
      d = std::max({d, std::fabs(f - double(i) / draws.size()),
                    std::fabs(f - double(i + 1) / draws.size())});
    }
    EXPECT_LT(d, 1.63 / std::sqrt(4000.0)) << shape;  // 1% level
  }
  RandomStream r(1, StreamFamily::kTesting, 0);
  EXPECT_THROW(r.gamma(0.0), std::domain_error);
}

TEST(Parallel, SlotsIndependentOfWorkers) {
  std::vector<double> a(1000), b(1000);
  parallel_for(a.size(), 1, [&](std::size_t i) {
    RandomStream r(9, StreamFamily::kTesting, i);
    a[i] = r.normal();
  });
  parallel_for(b.size(), 4, [&](std::size_t i) {
    RandomStream r(9, StreamFamily::kTesting, i);
    b[i] = r.normal();
  });
  EXPECT_EQ(a, b);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 5) throw std::runtime_error("x");
                            }),
               std::runtime_error);
}

TEST(Ks, TrivialCases) {
  std::vector<double> a(100), b(100);
  RandomStream r(3, StreamFamily::kTesting, 0);
  for (double& x : a) x = r.normal();
  EXPECT_EQ(ks_two_sample(a, a).statistic, 0.0);
  EXPECT_EQ(ks_two_sample(a, a).p_value, 1.0);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = 100.0 + i;
  EXPECT_EQ(ks_two_sample(a, b).statistic, 1.0);
  EXPECT_LT(ks_two_sample(a, b).p_value, 1e-20);
  std::vector<double> small(24, 0.0);
  EXPECT_THROW(ks_two_sample(small, a), std::invalid_argument);
  std::vector<double> flat(50, 1.0);
  EXPECT_THROW(ks_two_sample(flat, a), std::invalid_argument);
}

TEST(Ks, SeededRegression) {
  std::vector<double> a(1000), b(1000);
  RandomStream ra(11, StreamFamily::kTesting, 0);
  RandomStream rb(11, StreamFamily::kTesting, 1);
  for (double& x : a) x = ra.normal();
  for (double& x : b) x = rb.normal();
  const auto r = ks_two_sample(a, b);
  EXPECT_GT(r.p_value, 0.001);
  // Kolmogorov survival reference points
  EXPECT_NEAR(kolmogorov_survival(1.358), 0.05, 5e-4);
  EXPECT_NEAR(kolmogorov_survival(1.628), 0.01, 1e-4);
}

TEST(SampleQuantile, Type7) {
  std::vector<double> x = {4, 1, 3, 2, 5};
  EXPECT_EQ(sample_quantile(x, 0.0), 1.0);
  EXPECT_EQ(sample_quantile(x, 0.5), 3.0);
  EXPECT_EQ(sample_quantile(x, 1.0), 5.0);
  EXPECT_NEAR(sample_quantile(x, 0.1), 1.4, 1e-15);
  EXPECT_THROW(sample_quantile(x, 1.5), std::invalid_argument);
}
