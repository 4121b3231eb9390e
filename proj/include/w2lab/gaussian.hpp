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

// Univariate and bivariate Gaussian special functions together with the
// leading-order tail expansions of the quantile and density-quantile
// functions.

#ifndef W2LAB_GAUSSIAN_HPP_
#define W2LAB_GAUSSIAN_HPP_

namespace w2lab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.5772156649015328606065120900824024;
inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
inline constexpr double kLogSqrt2Pi = 0.9189385332046727417803297364056176;

/// A probability strictly inside (0, 1).
///
/// Both the value and its complement are stored so that points such as
/// 1 - 1e-32, which are not representable as doubles, can still be
/// carried exactly through the upper tail.
class UnitProb {
 public:
  /// Throws std::domain_error unless 0 < u < 1 and u is finite.
  explicit UnitProb(double u);

  /// Builds the point 1 - v from its complement v in (0, 1).
  static UnitProb from_complement(double v);

  double value() const { return value_; }
  double complement() const { return complement_; }
  /// min(u, 1 - u), accurate on both sides.
  double lower_tail() const { return upper_half() ? complement_ : value_; }
  bool upper_half() const { return value_ > 0.5; }
  /// The point 1 - u.
  UnitProb mirrored() const { return UnitProb(complement_, value_); }

 private:
  UnitProb(double value, double complement)
      : value_(value), complement_(complement) {}
  double value_;
  double complement_;
};

/// Correlation coefficient with |rho| < 1.
class Correlation {
 public:
  explicit Correlation(double rho);
  double value() const { return rho_; }
  bool is_zero() const { return rho_ == 0.0; }

 private:
  double rho_;
};

/// Result of one of the closed-form tail expansions.
struct TailExpansion {
  double u;                     // the probability (as a double)
  double L;                     // log(1 / (1 - u))
  double LL;                    // log log(1 / (1 - u))
  double value;                 // the expansion value
  double relative_error_order;  // magnitude of the neglected term
};

double std_normal_pdf(double x);

/// Phi(x). Rejects non-finite input.
double std_normal_cdf(double x);
/// 1 - Phi(x) without cancellation.
double std_normal_sf(double x);
/// log(1 - Phi(x)), finite for every finite x.
double log_std_normal_sf(double x);
/// (1 - Phi(x)) / phi(x), the scaled complement, for any finite x.
double mills_ratio(double x);

/// Phi^{-1}(p): Acklam rational start plus one Halley step.
double std_normal_quantile(UnitProb p);
double std_normal_quantile(double p);

/// h(u) = phi(Phi^{-1}(u)).
double density_quantile_h(UnitProb u);

/// psi(x) = -log(1 - Phi(x)).
double psi(double x);
/// x^2/2 + log x + log(2 pi)/2; requires x > 1.
TailExpansion psi_expansion(double x);

/// sqrt(2 (L - LL/2 - log(4 pi)/2)) approximating Phi^{-1}(u) near 1.
/// Requires L = log(1/(1-u)) > e.
TailExpansion quantile_tail_expansion(UnitProb u);
/// The same expansion written as psi^{-1}(L), i.e. with the constants kept
/// as -log(2 pi)/2 - log(2)/2.
TailExpansion quantile_tail_expansion_split(UnitProb u);
/// sqrt(2) (1 - u) sqrt(L) approximating h(u) near 1. Requires L > e.
TailExpansion h_tail_expansion(UnitProb u);

/// P(X <= x, Y <= y) for a standard bivariate normal with correlation rho.
double bivariate_normal_cdf(double x, double y, Correlation rho);
/// C_rho(u, v) = P(X <= Phi^{-1}(u), Y <= Phi^{-1}(v)).
double gaussian_copula(UnitProb u, UnitProb v, Correlation rho);

/// Owen's T function T(h, a) for a >= 0.
double owens_t(double h, double a);
/// u - C_rho(u, u) = P(X <= x, Y > x) with x = Phi^{-1}(u), computed as
/// 2 T(x, sqrt((1 - rho) / (1 + rho))) so no difference of close numbers is
/// ever formed.
double copula_diagonal_gap(UnitProb u, Correlation rho);
/// (u - C_rho(u, u)) / h(u), free of under/overflow for tiny tails.
double copula_diagonal_gap_over_h(UnitProb u, Correlation rho);

struct ScaledTail {
  double exact;       // 1 - Phi(a Phi^{-1}(u))
  double asymptotic;  // (4 pi)^((1-a^2)/2) (1-u)^(a^2) / (a L^((1-a^2)/2)), as usually quoted
  double ratio;       // exact / asymptotic; tends to (4 pi)^(a^2 - 1), not 1
  double corrected;   // same with (4 pi)^((a^2-1)/2), from x^2 = 2L - log L - log 4 pi
  double ratio_corrected;
};

/// Requires a > 0 and L > e.
ScaledTail scaled_tail(double a, UnitProb u);

}  // namespace w2lab

#endif  // W2LAB_GAUSSIAN_HPP_
