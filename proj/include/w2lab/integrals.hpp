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

// Singular integrals built on h(u) = phi(Phi^{-1}(u)): the centering
// integral of u(1-u)/h^2 and its bulk piece, and the second moment of the
// two-bridge functional, int (u - C_rho(u,u)) / h^2.
//
// Tails are integrated in t with min(u, 1-u) = exp(-e^t). Under that map
// v(1-v)/h^2 dv becomes (1-v) M(x)^2 L dt, with M the Mills ratio at
// x = -Phi^{-1}(v) and L = e^t, which is bounded and tends to 1/2.

#ifndef W2LAB_INTEGRALS_HPP_
#define W2LAB_INTEGRALS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

#include "w2lab/gaussian.hpp"
#include "w2lab/quadrature.hpp"

namespace w2lab {

struct IntegralOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t max_panels = 20000;
};

struct SingularIntegralResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  UnitProb lower{0.5};
  UnitProb upper{0.5};
};

/// Signals a nonintegrable singularity. tail_value is the transformed
/// integrand at the deepest probe; a nonzero limit there means the integral
/// grows without bound as the cut shrinks.
class DivergentIntegral : public std::runtime_error {
 public:
  DivergentIntegral(const std::string& what, double tail_value)
      : std::runtime_error(what), tail_value_(tail_value) {}
  double tail_value() const { return tail_value_; }

 private:
  double tail_value_;
};

/// u (1 - u) / h(u)^2.
double variance_weight(UnitProb u);

struct BickelResult {
  SingularIntegralResult integral;
  double centered = 0.0;  // value - log log n
};

/// log 2 + Euler's gamma.
inline double bickel_constant() { return 0.6931471805599453 + kEulerGamma; }

/// int_{1/n}^{1-1/n} u(1-u)/h^2, as twice the lower half in the t variable.
/// n is real so that cuts like 1e32 are legal; requires n >= 8.
BickelResult bickel_integral(double n, const IntegralOptions& opts = {});
/// The same integral over the whole interval in the logit variable; used as
/// an independent cross-check of the symmetric route.
BickelResult bickel_integral_full(double n, const IntegralOptions& opts = {});

struct D1nResult {
  SingularIntegralResult integral;
  std::size_t cut_count = 0;  // ceil(C (log n)^theta)
  double ratio = 0.0;         // value / log log n
};

/// int_{1/2}^{1 - K/n} u(1-u)/h^2 with K = ceil(C (log n)^theta).
D1nResult d1n(double n, double C, double theta, const IntegralOptions& opts = {});

/// 2 int_0^1 (u - C_rho(u,u)) / h^2. For every |rho| < 1 the copula is tail
/// independent, u - C_rho(u,u) ~ min(u, 1-u) at both ends, and the integral
/// diverges like 2 log log(1/delta); this always throws DivergentIntegral
/// carrying the transformed tail value.
SingularIntegralResult limit_second_moment(Correlation rho,
                                           const IntegralOptions& opts = {});

/// 2 int_delta^{1-delta} (u - C_rho(u,u)) / h^2 for 0 < delta < 1/2.
SingularIntegralResult truncated_second_moment(Correlation rho, double delta,
                                               const IntegralOptions& opts = {});
/// 2 int over [d_small, d_large] and its mirror, 0 < d_small <= d_large <= 1/2:
/// the mass a grid cut at d_large omits relative to one cut at d_small.
SingularIntegralResult tail_second_moment(Correlation rho, double d_small,
                                          double d_large,
                                          const IntegralOptions& opts = {});

/// The transformed second-moment integrand at lower-tail probability v.
double second_moment_tail_integrand(Correlation rho, double v);

struct CopulaTailDiagnostics {
  double u = 0.0;
  double L = 0.0;                  // log(1 / (1 - u))
  double integrand = 0.0;          // (u - C_rho(u,u)) / h^2
  double envelope_log2 = 0.0;      // 1 / ((1-u) L^2)
  double envelope_negative = 0.0;  // (1-u)^((1-rho)/(1+rho)) / L^(2 rho/(1+rho)) / h^2
  double envelope_independent = 0.0;  // 1 / (2 (1-u) L)
  double ratio_log2 = 0.0;
  double ratio_negative = 0.0;
  double ratio_independent = 0.0;
};

/// Requires L > e.
CopulaTailDiagnostics copula_diagonal_tail(Correlation rho, UnitProb u);

}  // namespace w2lab

#endif  // W2LAB_INTEGRALS_HPP_
