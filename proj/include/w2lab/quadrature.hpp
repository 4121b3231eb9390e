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

// Globally adaptive Gauss-Kronrod (7/15) quadrature with compensated,
// position-ordered summation of the accepted panels.

#ifndef W2LAB_QUADRATURE_HPP_
#define W2LAB_QUADRATURE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace w2lab {

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t initial_panels = 4;
  std::size_t max_panels = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
};

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw QuadratureFailure("non-finite integrand value on [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over [a, b]. Throws QuadratureFailure when the error target
/// max(abs_tol, rel_tol |I|) is not met within max_panels.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    const QuadratureOptions& opts = {}) {
  if (!(a < b)) {
    if (a == b) return {};
    throw std::invalid_argument("integrate_adaptive: reversed bounds");
  }
  std::priority_queue<detail::Panel> queue;
  const std::size_t initial = std::max<std::size_t>(1, opts.initial_panels);
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i < initial; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / initial;
    const double hi =
        i + 1 == initial ? b : a + (b - a) * static_cast<double>(i + 1) / initial;
    auto panel = detail::gauss_kronrod_15(f, lo, hi);
    total += panel.value;
    total_error += panel.error;
    queue.push(panel);
  }
  std::size_t evaluations = 15 * initial;
  while (total_error > std::max(opts.abs_tol, opts.rel_tol * std::fabs(total))) {
    if (queue.size() >= opts.max_panels) {
      throw QuadratureFailure(
          "adaptive quadrature did not reach tolerance: error estimate " +
          std::to_string(total_error) + " with " +
          std::to_string(queue.size()) + " panels");
    }
    const detail::Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw QuadratureFailure("adaptive quadrature exhausted interval resolution");
    }
    auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  std::vector<detail::Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
  CompensatedSum value;
  CompensatedSum error;
  for (const auto& p : panels) {
    value.add(p.value);
    error.add(p.error);
  }
  return {value.value(), error.value(), evaluations};
}

}  // namespace w2lab

#endif  // W2LAB_QUADRATURE_HPP_
