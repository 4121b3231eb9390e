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

#include "w2lab/integrals.hpp"
#include "w2lab/quadrature.hpp"

using namespace w2lab;

TEST(VarianceWeight, Values) {
  EXPECT_NEAR(variance_weight(UnitProb(0.5)), 0.5 * kPi, 1e-15);
  for (double u : {1e-6, 0.1, 0.37}) {
    const double direct = u * (1 - u) / std::pow(density_quantile_h(UnitProb(u)), 2);
    EXPECT_NEAR(variance_weight(UnitProb(u)), direct, 1e-12 * direct);
    EXPECT_NEAR(variance_weight(UnitProb(u)), variance_weight(UnitProb::from_complement(u)),
                1e-13 * direct);
  }
  const double v = 1e-8;
  const double L = -std::log(v);
  const double ratio = variance_weight(UnitProb::from_complement(v)) * 2 * v * L;
  EXPECT_NEAR(ratio, 1.0, 0.2);
  // no overflow deep in the tail
  EXPECT_TRUE(std::isfinite(variance_weight(UnitProb(1e-300))));
}

TEST(Bickel, AgainstRawQuadrature) {
  // moderate n, where the raw integrand is harmless in u
  const double n = 1000;
  QuadratureOptions o{1e-14, 1e-12, 8, 20000};
  const double raw =
      integrate_adaptive([](double u) { return variance_weight(UnitProb(u)); }, 1 / n, 1 - 1 / n, o)
          .value;
  EXPECT_NEAR(bickel_integral(n).integral.value, raw, 1e-9 * raw);
}

TEST(Bickel, SymmetricRouteMatchesFullInterval) {
  for (double n : {1e4, 1e8, 1e16, 1e32}) {
    const auto half = bickel_integral(n);
    const auto full = bickel_integral_full(n);
    EXPECT_NEAR(half.integral.value, full.integral.value, 1e-10 * full.integral.value) << n;
  }
}

TEST(Bickel, ToleranceHalvingIsStable) {
  for (double n : {1e4, 1e16}) {
    const auto a = bickel_integral(n);
    IntegralOptions tight;
    tight.rel_tol = 0.5e-9;
    tight.abs_tol = 0.5e-12;
    const auto b = bickel_integral(n, tight);
    // at least as good as the reported estimate, with a floor at rounding level
    EXPECT_LE(std::fabs(a.integral.value - b.integral.value),
              std::max(a.integral.abs_error_estimate, 1e-14 * a.integral.value));
  }
}

TEST(Bickel, MonotoneAndDiverging) {
  double prev = 0.0;
  for (double m : {10.0, 1e3, 1e6, 1e12, 1e24, 1e48, 1e96}) {
    const auto b = bickel_integral(m);
    EXPECT_GT(b.integral.value, prev);
    prev = b.integral.value;
    // grows like log log m: the centered value stays bounded
    if (m >= 1e6) EXPECT_NEAR(b.centered, bickel_constant(), 0.3) << m;
  }
  EXPECT_THROW(bickel_integral(7.0), std::invalid_argument);
}

TEST(D1n, Basics) {
  for (double n : {1e4, 1e8, 1e32}) {
    const auto d = d1n(n, 1.0, 2.0);
    EXPECT_LT(d.integral.value, bickel_integral(n).integral.value);
    EXPECT_EQ(d.cut_count, static_cast<std::size_t>(std::ceil(std::pow(std::log(n), 2))));
    EXPECT_NEAR(d.ratio, d.integral.value / std::log(std::log(n)), 1e-15);
  }
  EXPECT_THROW(d1n(1e4, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(d1n(100, 20.0, 2.0), std::invalid_argument);
}

TEST(SecondMoment, DivergesForEveryRho) {
  for (double r : {0.0, 0.2, -0.2, 0.5, -0.5, 0.8, -0.8, 0.999}) {
    try {
      limit_second_moment(Correlation(r));
      FAIL() << "expected divergence at rho=" << r;
    } catch (const DivergentIntegral& e) {
      // tends to 1/2; slowest as rho -> 1, where the tail starts deeper
      EXPECT_GT(e.tail_value(), r > 0.9 ? 0.25 : 0.4) << r;
    }
  }
}

TEST(SecondMoment, TruncatedGrowsLikeTwiceLogLog) {
  for (double r : {0.0, 0.6, -0.6}) {
    const Correlation c(r);
    double prev = 0.0;
    for (double d : {1e-2, 1e-4, 1e-8, 1e-16, 1e-64, 1e-256}) {
      const double v = truncated_second_moment(c, d).value;
      EXPECT_GT(v, prev);
      prev = v;
    }
    // increments per doubling of log(1/delta) approach 2 log 2
    const double a = truncated_second_moment(c, 1e-128).value;
    const double b = truncated_second_moment(c, 1e-256).value;
    EXPECT_NEAR(b - a, 2 * std::log(2.0), 0.05) << r;
  }
}

TEST(SecondMoment, TruncatedLimitsInRho) {
  const double d = 1e-4;
  EXPECT_LT(truncated_second_moment(Correlation(1 - 1e-9), d).value, 1e-3);
  // decreasing in rho on the positive side
  double prev = INFINITY;
  for (double r : {0.0, 0.3, 0.6, 0.9, 0.99}) {
    const double v = truncated_second_moment(Correlation(r), d).value;
    EXPECT_LT(v, prev);
    prev = v;
  }
  // rho = 0 is the Bickel integrand doubled
  const double indep = truncated_second_moment(Correlation(0.0), d).value;
  EXPECT_NEAR(indep, 2 * bickel_integral(1 / d).integral.value, 1e-8 * indep);
  // the tail split is additive
  const Correlation c(0.6);
  const double whole = truncated_second_moment(c, 1e-6).value;
  const double parts = truncated_second_moment(c, 1e-3).value + tail_second_moment(c, 1e-6, 1e-3).value;
  EXPECT_NEAR(whole, parts, 1e-9 * whole);
}

TEST(CopulaTail, Diagnostics) {
  const Correlation c(0.5);
  for (int j = 4; j <= 10; ++j) {
    const auto d = copula_diagonal_tail(c, UnitProb::from_complement(std::pow(10.0, -j)));
    EXPECT_GT(d.integrand, 0.0);
    // the tail-independent envelope 1/(2 (1-u) L) is the sharp one
    EXPECT_GT(d.ratio_independent, 1.0);
    EXPECT_LT(d.ratio_independent, 1.25);
  }
  // the 1/((1-u) L^2) envelope is exceeded by a factor growing like L/2
  const auto lo = copula_diagonal_tail(c, UnitProb::from_complement(1e-4));
  const auto hi = copula_diagonal_tail(c, UnitProb::from_complement(1e-10));
  EXPECT_GT(hi.ratio_log2, lo.ratio_log2 * 2.0);
  EXPECT_THROW(copula_diagonal_tail(c, UnitProb(0.9)), std::domain_error);
}
