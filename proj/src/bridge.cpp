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

#include "w2lab/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "w2lab/parallel.hpp"
#include "w2lab/quadrature.hpp"

namespace w2lab {

GridSpec build_grid(std::size_t m, double delta) {
  if (m < 16) throw std::invalid_argument("build_grid: m must be at least 16");
  if (!(delta > 0.0 && delta < 0.25)) {
    throw std::invalid_argument("build_grid: delta must lie in (0, 1/4)");
  }
  const std::size_t m_end = m / 4;
  const std::size_t m_mid = m - 2 * m_end;
  const double third = 1.0 / 3.0;
  // lower half: the outer piece in s = log log(1/u), then the lower half of
  // the middle third
  std::vector<double> lower;
  const double s_delta = std::log(-std::log(delta));
  const double s_third = std::log(-std::log(third));
  for (std::size_t j = 0; j < m_end; ++j) {
    const double s = s_delta + (s_third - s_delta) * static_cast<double>(j) /
                                   static_cast<double>(m_end);
    lower.push_back(std::exp(-std::exp(s)));
  }
  lower.front() = delta;
  const double step = third / static_cast<double>(m_mid - 1);
  for (std::size_t i = 0; i < m_mid / 2; ++i) {
    lower.push_back(third + step * static_cast<double>(i));
  }

  GridSpec g;
  g.m = m;
  g.delta = delta;
  g.nodes.reserve(m);
  for (double u : lower) g.nodes.emplace_back(u);
  if (m_mid % 2 == 1) g.nodes.emplace_back(0.5);
  for (auto it = lower.rbegin(); it != lower.rend(); ++it) {
    g.nodes.push_back(UnitProb::from_complement(*it));
  }
  return g;
}

double bridge_cov(UnitProb u, UnitProb v) {
  // min(u,v) - uv = min(u,v) (1 - max(u,v)), formed from complements
  const UnitProb& lo = u.value() <= v.value() ? u : v;
  const UnitProb& hi = u.value() <= v.value() ? v : u;
  return lo.value() * hi.complement();
}

double bridge_cross_cov(UnitProb u, UnitProb v, Correlation rho) {
  if (u.value() == v.value()) {
    // C(u,u) - u^2 = u(1-u) - (u - C(u,u))
    return u.value() * u.complement() - copula_diagonal_gap(u, rho);
  }
  return gaussian_copula(u, v, rho) - u.value() * v.value();
}

GaussianBridgeSampler::GaussianBridgeSampler(const GridSpec& grid, Correlation rho)
    : grid_(std::make_shared<const GridSpec>(grid)), rho_(rho) {
  const auto& nodes = grid_->nodes;
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd cov(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double c = bridge_cov(nodes[i], nodes[j]);
      cov(i, j) = cov(j, i) = c;
      cov(m + i, m + j) = cov(m + j, m + i) = c;
      const double x_ij = bridge_cross_cov(nodes[i], nodes[j], rho);
      // symmetric in (u, v) for an exchangeable pair
      cov(m + i, j) = cov(j, m + i) = x_ij;
      cov(m + j, i) = cov(i, m + j) = x_ij;
    }
  }
  for (double jitter : {0.0, 1e-12, 1e-11, 1e-10, 1e-9}) {
    Eigen::MatrixXd work = cov;
    work.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      jitter_ = jitter;
      if (jitter > 1e-12) {
        std::cerr << "warning: bridge covariance needed diagonal jitter " << jitter
                  << " (rho=" << rho.value() << ", m=" << m << ")\n";
      }
      return;
    }
  }
  throw std::runtime_error(
      "GaussianBridgeSampler: covariance not positive definite with jitter 1e-9 (rho=" +
      std::to_string(rho.value()) + ", m=" + std::to_string(m) + ")");
}

BridgePair GaussianBridgeSampler::draw(RandomStream& rng) const {
  const auto dim = chol_.rows();
  Eigen::VectorXd z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z(i) = rng.normal();
  const Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>() * z;
  const auto m = dim / 2;
  BridgePair out;
  out.grid = grid_;
  out.rho = rho_;
  out.bx.assign(y.data(), y.data() + m);
  out.by.assign(y.data() + m, y.data() + dim);
  return out;
}

BridgePair simulate_bridge_pair_gaussian(const GridSpec& grid, Correlation rho,
                                         std::uint64_t seed) {
  RandomStream rng(seed, StreamFamily::kLimitGaussian, 0);
  return GaussianBridgeSampler(grid, rho).draw(rng);
}

namespace {

std::vector<double> node_quantiles(const GridSpec& grid) {
  std::vector<double> q;
  q.reserve(grid.nodes.size());
  for (const auto& u : grid.nodes) q.push_back(std_normal_quantile(u));
  return q;
}

BridgePair coupled_draw(const std::shared_ptr<const GridSpec>& grid,
                        const std::vector<double>& q, Correlation rho,
                        std::size_t m_sample, RandomStream& rng) {
  if (m_sample < 10000) {
    throw std::invalid_argument("simulate_bridge_pair_coupled: m_sample must be at least 1e4");
  }
  const double r = rho.value();
  const double s = std::sqrt((1.0 - r) * (1.0 + r));
  std::vector<double> xs(m_sample);
  std::vector<double> ys(m_sample);
  for (std::size_t i = 0; i < m_sample; ++i) {
    const double x = rng.normal();
    const double z = rng.normal();
    xs[i] = x;
    ys[i] = r * x + s * z;
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  // U <= u iff X <= Phi^{-1}(u)
  const double dm = static_cast<double>(m_sample);
  const double root = std::sqrt(dm);
  BridgePair out;
  out.grid = grid;
  out.rho = rho;
  out.bx.resize(q.size());
  out.by.resize(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    const auto u = grid->nodes[k].value();
    const auto cx = std::upper_bound(xs.begin(), xs.end(), q[k]) - xs.begin();
    const auto cy = std::upper_bound(ys.begin(), ys.end(), q[k]) - ys.begin();
    out.bx[k] = root * (static_cast<double>(cx) / dm - u);
    out.by[k] = root * (static_cast<double>(cy) / dm - u);
  }
  return out;
}

}  // namespace

BridgePair simulate_bridge_pair_coupled(const GridSpec& grid, Correlation rho,
                                        std::size_t m_sample, RandomStream& rng) {
  auto shared = std::make_shared<const GridSpec>(grid);
  return coupled_draw(shared, node_quantiles(grid), rho, m_sample, rng);
}

BridgePair simulate_bridge_pair_coupled(const GridSpec& grid, Correlation rho,
                                        std::size_t m_sample, std::uint64_t seed) {
  RandomStream rng(seed, StreamFamily::kLimitCoupled, 0);
  return simulate_bridge_pair_coupled(grid, rho, m_sample, rng);
}

namespace {

template <typename F>
double trapezoid(const GridSpec& grid, F&& f) {
  const auto& nodes = grid.nodes;
  CompensatedSum sum;
  double prev = f(0);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const double cur = f(k);
    // node spacing from whichever side keeps precision
    const double du = nodes[k].upper_half() && nodes[k - 1].upper_half()
                          ? nodes[k - 1].complement() - nodes[k].complement()
                          : nodes[k].value() - nodes[k - 1].value();
    sum.add(0.5 * du * (prev + cur));
    prev = cur;
  }
  return sum.value();
}

}  // namespace

double g_functional(const BridgePair& pair) {
  if (!pair.grid) throw std::invalid_argument("g_functional: pair has no grid");
  const auto& nodes = pair.grid->nodes;
  if (pair.bx.size() != nodes.size() || pair.by.size() != nodes.size()) {
    throw std::invalid_argument("g_functional: path length does not match grid");
  }
  return trapezoid(*pair.grid, [&](std::size_t k) {
    const double d = (pair.bx[k] - pair.by[k]) / density_quantile_h(nodes[k]);
    return d * d;
  });
}

double expected_g_functional(const GridSpec& grid, Correlation rho) {
  return trapezoid(grid, [&](std::size_t k) {
    const double h = density_quantile_h(grid.nodes[k]);
    return 2.0 * copula_diagonal_gap(grid.nodes[k], rho) / (h * h);
  });
}

std::string_view to_string(Mechanism m) {
  return m == Mechanism::kGaussianGrid ? "gaussian_grid" : "empirical_coupling";
}

Mechanism mechanism_from_string(std::string_view s) {
  if (s == "gaussian_grid") return Mechanism::kGaussianGrid;
  if (s == "empirical_coupling") return Mechanism::kEmpiricalCoupling;
  throw std::invalid_argument("unknown mechanism: " + std::string(s));
}

LimitSample sample_limit_law(Correlation rho, const GridSpec& grid, std::size_t n_draws,
                             Mechanism mechanism, std::uint64_t seed,
                             const LimitSampleOptions& opts) {
  if (rho.is_zero() && !opts.allow_independent) {
    throw std::invalid_argument(
        "sample_limit_law: rho = 0 gives independent bridges and an infinite "
        "functional almost surely; set allow_independent for the truncation demo");
  }
  if (n_draws == 0) throw std::invalid_argument("sample_limit_law: n_draws must be positive");
  LimitSample out;
  out.rho = rho;
  out.mechanism = mechanism;
  out.grid = grid;
  out.seed = seed;
  out.values.assign(n_draws, 0.0);
  if (mechanism == Mechanism::kGaussianGrid) {
    const GaussianBridgeSampler sampler(grid, rho);
    parallel_for(n_draws, opts.workers, [&](std::size_t i) {
      RandomStream rng(seed, StreamFamily::kLimitGaussian, i);
      out.values[i] = g_functional(sampler.draw(rng));
    });
  } else {
    auto shared = std::make_shared<const GridSpec>(grid);
    const auto q = node_quantiles(grid);
    parallel_for(n_draws, opts.workers, [&](std::size_t i) {
      RandomStream rng(seed, StreamFamily::kLimitCoupled, i);
      out.values[i] = g_functional(coupled_draw(shared, q, rho, opts.m_sample, rng));
    });
  }
  return out;
}

}  // namespace w2lab
