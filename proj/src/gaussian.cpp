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

#include "w2lab/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "w2lab/quadrature.hpp"

namespace w2lab {

namespace {

constexpr double kSqrt2 = 1.414213562373095048801688724209698;
constexpr double kE = 2.718281828459045235360287471352662;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": non-finite argument");
  }
}

// Acklam's rational approximation for p <= 1/2 (relative error ~1e-9).
double acklam_lower(double p) {
  static constexpr std::array<double, 6> a = {
      -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {
      7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Phi^{-1}(p) for 0 < p <= 1/2.
double quantile_lower(double p) {
  if (p == 0.5) return 0.0;
  double x = acklam_lower(p);
  // One Halley step. The residual is formed relative to the scale of p so
  // that neither the centre (|x| small) nor the deep tail loses precision.
  double u;
  if (std::fabs(x) < 0.5) {
    const double e = 0.5 * std::erf(x / kSqrt2) - (p - 0.5);
    u = e * std::exp(0.5 * x * x + kLogSqrt2Pi);
  } else {
    const double cdf = 0.5 * std::erfc(-x / kSqrt2);
    const double r = cdf / p - 1.0;
    u = r * std::exp(std::log(p) + 0.5 * x * x + kLogSqrt2Pi);
  }
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

// J(h, a) = int_0^a exp(-h^2 t^2 / 2) / (1 + t^2) dt, so that
// T(h, a) = phi(h) J(h, a) / sqrt(2 pi).
double owens_t_kernel(double h, double a) {
  if (a == 0.0) return 0.0;
  if (h == 0.0) return std::atan(a);
  const double h2 = h * h;
  // Beyond t = 40/|h| the integrand is below exp(-800).
  const double upper = std::min(a, 40.0 / std::fabs(h));
  auto f = [h2](double t) { return std::exp(-0.5 * h2 * t * t) / (1.0 + t * t); };
  QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-14;
  opts.initial_panels = 2;
  return integrate_adaptive(f, 0.0, upper, opts).value;
}

double correlation_a(Correlation rho) {
  const double r = rho.value();
  return std::sqrt((1.0 - r) / (1.0 + r));
}

}  // namespace

UnitProb::UnitProb(double u) {
  if (!std::isfinite(u) || !(u > 0.0 && u < 1.0)) {
    throw std::domain_error("UnitProb: value must lie strictly inside (0, 1)");
  }
  value_ = u;
  complement_ = 1.0 - u;
}

UnitProb UnitProb::from_complement(double v) {
  if (!std::isfinite(v) || !(v > 0.0 && v < 1.0)) {
    throw std::domain_error("UnitProb: complement must lie strictly inside (0, 1)");
  }
  return UnitProb(1.0 - v, v);
}

Correlation::Correlation(double rho) : rho_(rho) {
  if (!std::isfinite(rho) || !(std::fabs(rho) < 1.0)) {
    throw std::domain_error("Correlation: |rho| must be < 1");
  }
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) {
  require_finite(x, "std_normal_cdf");
  return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_sf(double x) {
  require_finite(x, "std_normal_sf");
  return 0.5 * std::erfc(x / kSqrt2);
}

double mills_ratio(double x) {
  require_finite(x, "mills_ratio");
  if (x < 30.0) {
    return std_normal_sf(x) / std_normal_pdf(x);
  }
  // Continued fraction 1/(x + 1/(x + 2/(x + 3/(x + ...)))), evaluated
  // backwards; 40 levels are far more than needed for x >= 30.
  double tail = x;
  for (int k = 40; k >= 1; --k) tail = x + k / tail;
  return 1.0 / tail;
}

double log_std_normal_sf(double x) {
  require_finite(x, "log_std_normal_sf");
  if (x < -5.0) return std::log1p(-std_normal_cdf(x));
  if (x < 30.0) return std::log(std_normal_sf(x));
  return std::log(mills_ratio(x)) - 0.5 * x * x - kLogSqrt2Pi;
}

double std_normal_quantile(UnitProb p) {
  const double x = quantile_lower(p.lower_tail());
  return p.upper_half() ? -x : x;
}

double std_normal_quantile(double p) { return std_normal_quantile(UnitProb(p)); }

double density_quantile_h(UnitProb u) {
  return std_normal_pdf(quantile_lower(u.lower_tail()));
}

double psi(double x) { return -log_std_normal_sf(x); }

TailExpansion psi_expansion(double x) {
  require_finite(x, "psi_expansion");
  if (!(x > 1.0)) {
    throw std::domain_error("psi_expansion: requires x > 1");
  }
  TailExpansion out;
  out.u = std_normal_cdf(x);
  out.L = psi(x);
  out.LL = std::log(out.L);
  out.value = 0.5 * x * x + std::log(x) + kLogSqrt2Pi;
  out.relative_error_order = 1.0 / (x * x);
  return out;
}

namespace {

TailExpansion tail_frame(UnitProb u, const char* who) {
  TailExpansion out;
  out.u = u.value();
  out.L = -std::log(u.complement());
  if (!(out.L > kE)) {
    throw std::domain_error(std::string(who) + ": requires log(1/(1-u)) > e");
  }
  out.LL = std::log(out.L);
  out.relative_error_order = out.LL / out.L;
  return out;
}

}  // namespace

TailExpansion quantile_tail_expansion(UnitProb u) {
  TailExpansion out = tail_frame(u, "quantile_tail_expansion");
  out.value = std::sqrt(2.0 * (out.L - 0.5 * out.LL - 0.5 * std::log(4.0 * kPi)));
  return out;
}

TailExpansion quantile_tail_expansion_split(UnitProb u) {
  TailExpansion out = tail_frame(u, "quantile_tail_expansion_split");
  out.value = std::sqrt(2.0 * (out.L - 0.5 * std::log(out.L) -
                               0.5 * std::log(2.0 * kPi) - 0.5 * std::log(2.0)));
  return out;
}

TailExpansion h_tail_expansion(UnitProb u) {
  TailExpansion out = tail_frame(u, "h_tail_expansion");
  out.value = kSqrt2 * u.complement() * std::sqrt(out.L);
  return out;
}

// Genz's refinement of the Drezner-Wesolowsky method; returns
// P(X > dh, Y > dk).
namespace {

double bivariate_upper(double dh, double dk, double r) {
  static constexpr double w6[3] = {0.1713244923791705, 0.3607615730481384,
                                   0.4679139345726904};
  static constexpr double x6[3] = {0.9324695142031522, 0.6612093864662647,
                                   0.2386191860831970};
  static constexpr double w12[6] = {0.04717533638651177, 0.1069393259953183,
                                    0.1600783285433464,  0.2031674267230659,
                                    0.2334925365383547,  0.2491470458134029};
  static constexpr double x12[6] = {0.9815606342467191, 0.9041172563704750,
                                    0.7699026741943050, 0.5873179542866171,
                                    0.3678314989981802, 0.1252334085114692};
  static constexpr double w20[10] = {
      0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
      0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
      0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
      0.1527533871307259};
  static constexpr double x20[10] = {
      0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
      0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
      0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
      0.07652652113349733};

  const double* w;
  const double* x;
  int ng;
  if (std::fabs(r) < 0.3) {
    w = w6; x = x6; ng = 3;
  } else if (std::fabs(r) < 0.75) {
    w = w12; x = x12; ng = 6;
  } else {
    w = w20; x = x20; ng = 10;
  }

  constexpr double tp = 2.0 * kPi;
  double h = dh;
  double k = dk;
  double hk = h * k;
  double bvn = 0.0;

  if (std::fabs(r) < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = 0.5 * std::asin(r);
    for (int i = 0; i < ng; ++i) {
      for (int sgn : {-1, 1}) {
        const double sn = std::sin(asr * (1.0 + sgn * x[i]));
        bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return bvn * asr / tp + std_normal_sf(h) * std_normal_sf(k);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::fabs(r) < 1.0) {
    const double as = 1.0 - r * r;
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -0.5 * (bs / as + hk);
    if (asr > -100.0) {
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    }
    if (hk > -100.0) {
      const double b = std::sqrt(bs);
      const double sp = std::sqrt(tp) * std_normal_cdf(-b / a);
      bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a *= 0.5;
    double sum = 0.0;
    for (int i = 0; i < ng; ++i) {
      for (int sgn : {-1, 1}) {
        const double xs0 = a * (1.0 + sgn * x[i]);
        const double xs = xs0 * xs0;
        asr = -0.5 * (bs / xs + hk);
        if (asr > -100.0) {
          const double rs = std::sqrt(1.0 - xs);
          const double sp = 1.0 + c * xs * (1.0 + d * xs);
          const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
          sum += w[i] * std::exp(asr) * (sp - ep);
        }
      }
    }
    bvn = (a * sum - bvn) / tp;
  }
  if (r > 0.0) {
    bvn += std_normal_sf(std::max(h, k));
  } else if (h >= k) {
    bvn = -bvn;
  } else {
    const double span = h < 0.0 ? std_normal_cdf(k) - std_normal_cdf(h)
                                : std_normal_sf(h) - std_normal_sf(k);
    bvn = span - bvn;
  }
  return bvn;
}

}  // namespace

double bivariate_normal_cdf(double x, double y, Correlation rho) {
  if (std::isnan(x) || std::isnan(y)) {
    throw std::domain_error("bivariate_normal_cdf: NaN argument");
  }
  if (x == -std::numeric_limits<double>::infinity() ||
      y == -std::numeric_limits<double>::infinity()) {
    return 0.0;
  }
  if (std::isinf(x)) return std_normal_cdf(y);
  if (std::isinf(y)) return std_normal_cdf(x);
  if (rho.is_zero()) return std_normal_cdf(x) * std_normal_cdf(y);
  const double p = bivariate_upper(-x, -y, rho.value());
  return std::clamp(p, 0.0, 1.0);
}

double gaussian_copula(UnitProb u, UnitProb v, Correlation rho) {
  if (rho.is_zero()) return u.value() * v.value();
  return bivariate_normal_cdf(std_normal_quantile(u), std_normal_quantile(v), rho);
}

double owens_t(double h, double a) {
  require_finite(h, "owens_t");
  if (!(a >= 0.0) || std::isnan(a)) {
    throw std::domain_error("owens_t: requires a >= 0");
  }
  if (std::isinf(a)) {
    // T(h, inf) = (1 - Phi(|h|)) / 2.
    return 0.5 * std_normal_sf(std::fabs(h));
  }
  return std_normal_pdf(h) * kInvSqrt2Pi * owens_t_kernel(h, a);
}

double copula_diagonal_gap(UnitProb u, Correlation rho) {
  const double x = quantile_lower(u.lower_tail());
  return 2.0 * owens_t(x, correlation_a(rho));
}

double copula_diagonal_gap_over_h(UnitProb u, Correlation rho) {
  const double x = quantile_lower(u.lower_tail());
  return 2.0 * kInvSqrt2Pi * owens_t_kernel(x, correlation_a(rho));
}

ScaledTail scaled_tail(double a, UnitProb u) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("scaled_tail: requires a > 0");
  }
  const double v = u.complement();
  const double L = -std::log(v);
  if (!(L > kE)) {
    throw std::domain_error("scaled_tail: requires log(1/(1-u)) > e");
  }
  const double x = std_normal_quantile(u);
  const double a2 = a * a;
  const double log_exact = log_std_normal_sf(a * x);
  const double log_asym = 0.5 * (1.0 - a2) * std::log(4.0 * kPi) + a2 * std::log(v) -
                          std::log(a) - 0.5 * (1.0 - a2) * std::log(L);
  // the 4 pi power enters with the opposite sign once x^2 is expanded
  const double log_corr = log_asym - (1.0 - a2) * std::log(4.0 * kPi);
  ScaledTail out;
  out.exact = std::exp(log_exact);
  out.asymptotic = std::exp(log_asym);
  out.ratio = std::exp(log_exact - log_asym);
  out.corrected = std::exp(log_corr);
  out.ratio_corrected = std::exp(log_exact - log_corr);
  return out;
}

}  // namespace w2lab
