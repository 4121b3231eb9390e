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

#include "w2lab/integrals.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace w2lab {

namespace {

constexpr double kLog2 = 0.6931471805599453;

QuadratureOptions quad_options(const IntegralOptions& o) {
  QuadratureOptions q;
  q.abs_tol = o.abs_tol;
  q.rel_tol = o.rel_tol;
  q.max_panels = o.max_panels;
  q.initial_panels = 8;
  return q;
}

void check_options(const IntegralOptions& o) {
  if (!(o.rel_tol > 0.0) || !(o.abs_tol > 0.0)) {
    throw std::invalid_argument("integral options: tolerances must be positive");
  }
}

// Lower-tail probability at transformed coordinate t.
double tail_prob(double t) { return std::exp(-std::exp(t)); }

// (1-v) M(x)^2 L at v = exp(-e^t).
double weight_in_t(double t) {
  const double L = std::exp(t);
  const double v = std::exp(-L);
  const double x = -std_normal_quantile(UnitProb(v));
  const double m = mills_ratio(x);
  return (1.0 - v) * m * m * L;
}

SingularIntegralResult wrap(const QuadratureResult& q, double scale, UnitProb lo,
                            UnitProb hi) {
  SingularIntegralResult out;
  out.value = scale * q.value;
  out.abs_error_estimate = scale * q.abs_error;
  out.evaluations = q.evaluations;
  out.lower = lo;
  out.upper = hi;
  return out;
}

// int_{v_lo}^{1/2} v(1-v)/h^2 dv.
QuadratureResult lower_half_weight(double v_lo, const IntegralOptions& opts) {
  const double t_lo = std::log(kLog2);
  const double t_hi = std::log(-std::log(v_lo));
  return integrate_adaptive(weight_in_t, t_lo, t_hi, quad_options(opts));
}

void check_n(double n, const char* who) {
  if (!(n >= 8.0) || !std::isfinite(n)) {
    throw std::invalid_argument(std::string(who) + ": n must be finite and at least 8");
  }
}

}  // namespace

double variance_weight(UnitProb u) {
  const double v = u.lower_tail();
  if (v == 0.5) return 2.0 * kPi * 0.25;
  const double x = -std_normal_quantile(UnitProb(v));
  // v / h = M(x), so v (1-v) / h^2 = M^2 (1-v) / v.
  const double m = mills_ratio(x);
  return m * m * (1.0 - v) / v;
}

BickelResult bickel_integral(double n, const IntegralOptions& opts) {
  check_n(n, "bickel_integral");
  check_options(opts);
  const double cut = 1.0 / n;
  const auto q = lower_half_weight(cut, opts);
  BickelResult out;
  out.integral = wrap(q, 2.0, UnitProb(cut), UnitProb::from_complement(cut));
  out.centered = out.integral.value - std::log(std::log(n));
  return out;
}

BickelResult bickel_integral_full(double n, const IntegralOptions& opts) {
  check_n(n, "bickel_integral_full");
  check_options(opts);
  // u = 1 / (1 + e^{-s}); du = u(1-u) ds. The lower tail probability at s is
  // 1 / (1 + e^{|s|}), formed directly so the upper half keeps its precision.
  auto f = [](double s) {
    const double v = 1.0 / (1.0 + std::exp(std::fabs(s)));
    const double x = -std_normal_quantile(UnitProb(v));
    const double m = mills_ratio(x);
    // u(1-u)/h^2 * u(1-u) = (v/h)^2 (1-v)^2
    return m * m * (1.0 - v) * (1.0 - v);
  };
  const double s_max = std::log(n - 1.0);
  const auto q = integrate_adaptive(f, -s_max, s_max, quad_options(opts));
  BickelResult out;
  const double cut = 1.0 / n;
  out.integral = wrap(q, 1.0, UnitProb(cut), UnitProb::from_complement(cut));
  out.centered = out.integral.value - std::log(std::log(n));
  return out;
}

D1nResult d1n(double n, double C, double theta, const IntegralOptions& opts) {
  check_n(n, "d1n");
  check_options(opts);
  if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("d1n: C must be positive");
  if (!(theta > 1.0 && theta <= 2.0)) {
    throw std::invalid_argument("d1n: theta must lie in (1, 2]");
  }
  const double K = std::ceil(C * std::pow(std::log(n), theta));
  const double cut = K / n;
  if (!(cut < 0.5)) throw std::invalid_argument("d1n: cut K/n must lie below 1/2");
  const auto q = lower_half_weight(cut, opts);
  D1nResult out;
  out.integral = wrap(q, 1.0, UnitProb(0.5), UnitProb::from_complement(cut));
  out.cut_count = static_cast<std::size_t>(K);
  out.ratio = out.integral.value / std::log(std::log(n));
  return out;
}

double second_moment_tail_integrand(Correlation rho, double v) {
  if (!(v > 0.0 && v <= 0.5)) {
    throw std::invalid_argument("second_moment_tail_integrand: need 0 < v <= 1/2");
  }
  const UnitProb p(v);
  const double L = -std::log(v);
  const double x = -std_normal_quantile(p);
  // gap / h^2 dv = (gap / h) (v / h) L dt
  return copula_diagonal_gap_over_h(p, rho) * mills_ratio(x) * L;
}

SingularIntegralResult limit_second_moment(Correlation rho, const IntegralOptions& opts) {
  check_options(opts);
  // Deepest representable probe. The transformed integrand tends to the
  // tail-independence limit 1/2, so the t-integral to infinity diverges.
  const double v = std::numeric_limits<double>::min();
  const double tail = second_moment_tail_integrand(rho, v);
  std::ostringstream msg;
  msg << "limit_second_moment: u - C_rho(u,u) ~ min(u,1-u) at both ends (no tail "
         "dependence for |rho| < 1), so the integral diverges like 2 log log(1/delta); "
         "transformed integrand at v="
      << v << " is " << tail << " with rho=" << rho.value();
  throw DivergentIntegral(msg.str(), tail);
}

SingularIntegralResult tail_second_moment(Correlation rho, double d_small, double d_large,
                                          const IntegralOptions& opts) {
  check_options(opts);
  if (!(d_small > 0.0 && d_small <= d_large && d_large <= 0.5)) {
    throw std::invalid_argument("tail_second_moment: need 0 < d_small <= d_large <= 1/2");
  }
  auto f = [&](double t) { return second_moment_tail_integrand(rho, tail_prob(t)); };
  const double t_lo = std::log(-std::log(d_large));
  const double t_hi = std::log(-std::log(d_small));
  const auto q = integrate_adaptive(f, t_lo, t_hi, quad_options(opts));
  // symmetric in u <-> 1-u, and the moment carries a factor 2
  return wrap(q, 4.0, UnitProb(d_small), UnitProb(d_large));
}

SingularIntegralResult truncated_second_moment(Correlation rho, double delta,
                                               const IntegralOptions& opts) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw std::invalid_argument("truncated_second_moment: need 0 < delta < 1/2");
  }
  auto out = tail_second_moment(rho, delta, 0.5, opts);
  out.lower = UnitProb(delta);
  out.upper = UnitProb::from_complement(delta);
  return out;
}

CopulaTailDiagnostics copula_diagonal_tail(Correlation rho, UnitProb u) {
  const double v = u.complement();
  const double L = -std::log(v);
  if (!(L > std::exp(1.0))) {
    throw std::domain_error("copula_diagonal_tail: requires log(1/(1-u)) > e");
  }
  const double r = rho.value();
  const double x = -std_normal_quantile(UnitProb(v));
  const double m = mills_ratio(x);
  CopulaTailDiagnostics out;
  out.u = u.value();
  out.L = L;
  // gap(u) = gap(1-u); gap/h^2 = (gap/h) M / v
  out.integrand = copula_diagonal_gap_over_h(u, rho) * m / v;
  out.envelope_log2 = 1.0 / (v * L * L);
  out.envelope_independent = 1.0 / (2.0 * v * L);
  // h^2 = (v / M)^2
  const double bound = u.value() * std::pow(v, (1.0 - r) / (1.0 + r)) /
                       std::pow(L, 2.0 * r / (1.0 + r));
  out.envelope_negative = bound * m * m / (v * v);
  out.ratio_log2 = out.integrand / out.envelope_log2;
  out.ratio_negative = out.integrand / out.envelope_negative;
  out.ratio_independent = out.integrand / out.envelope_independent;
  return out;
}

}  // namespace w2lab
