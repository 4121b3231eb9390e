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

#ifndef W2LAB_DETAIL_SUMMARIZE_HPP_
#define W2LAB_DETAIL_SUMMARIZE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "w2lab/quadrature.hpp"

namespace w2lab {

template <typename Range>
MomentEstimate summarize(const Range& draws) {
  MomentEstimate out;
  CompensatedSum sum;
  std::size_t count = 0;
  for (double x : draws) {
    sum.add(x);
    ++count;
  }
  out.count = count;
  if (count == 0) return out;
  out.mean = sum.value() / static_cast<double>(count);
  if (count < 2) return out;
  CompensatedSum m2;
  CompensatedSum m4;
  for (double x : draws) {
    const double d = x - out.mean;
    m2.add(d * d);
    m4.add(d * d * d * d);
  }
  const double c = static_cast<double>(count);
  out.variance = m2.value() / (c - 1.0);
  out.se_mean = std::sqrt(out.variance / c);
  const double mu4 = m4.value() / c;
  const double mu2 = m2.value() / c;
  // Var(s^2) ~ (mu4 - mu2^2 (c-3)/(c-1)) / c
  const double var_s2 = (mu4 - mu2 * mu2 * (c - 3.0) / (c - 1.0)) / c;
  out.se_variance = std::sqrt(std::max(var_s2, 0.0));
  return out;
}

}  // namespace w2lab

#endif  // W2LAB_DETAIL_SUMMARIZE_HPP_
