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

// Correlated Brownian bridges on a truncated grid and the functional
// int ((B^X - B^Y) / h)^2 over [delta, 1 - delta].

#ifndef W2LAB_BRIDGE_HPP_
#define W2LAB_BRIDGE_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "w2lab/gaussian.hpp"
#include "w2lab/rng.hpp"

namespace w2lab {

struct GridSpec {
  std::size_t m = 0;
  double delta = 0.0;
  std::vector<UnitProb> nodes;
};

/// m >= 16 nodes in [delta, 1 - delta], 0 < delta < 1/4. The middle third
/// is uniform; each outer piece is equally spaced in log log(1/min(u, 1-u)).
/// The upper half mirrors the lower half exactly.
GridSpec build_grid(std::size_t m, double delta);

struct BridgePair {
  std::shared_ptr<const GridSpec> grid;
  std::vector<double> bx;
  std::vector<double> by;
  Correlation rho{0.0};
};

/// Exact Gaussian draws of (B^X, B^Y) at the grid nodes: Cholesky factor of
/// the 2m x 2m covariance, computed once. Diagonal jitter starts at 0 and
/// escalates by decades from 1e-12 to 1e-9; beyond that construction fails.
class GaussianBridgeSampler {
 public:
  GaussianBridgeSampler(const GridSpec& grid, Correlation rho);

  BridgePair draw(RandomStream& rng) const;
  double jitter() const { return jitter_; }
  const GridSpec& grid() const { return *grid_; }
  const Eigen::MatrixXd& cholesky() const { return chol_; }

 private:
  std::shared_ptr<const GridSpec> grid_;
  Correlation rho_;
  Eigen::MatrixXd chol_;
  double jitter_ = 0.0;
};

/// Analytic covariances of the pair at nodes u, v.
double bridge_cov(UnitProb u, UnitProb v);
double bridge_cross_cov(UnitProb u, UnitProb v, Correlation rho);

BridgePair simulate_bridge_pair_gaussian(const GridSpec& grid, Correlation rho,
                                         std::uint64_t seed);

/// sqrt(m) (F_m^U - id) and sqrt(m) (F_m^V - id) at the nodes from m_sample
/// correlated normal pairs; m_sample >= 1e4.
BridgePair simulate_bridge_pair_coupled(const GridSpec& grid, Correlation rho,
                                        std::size_t m_sample, RandomStream& rng);
BridgePair simulate_bridge_pair_coupled(const GridSpec& grid, Correlation rho,
                                        std::size_t m_sample, std::uint64_t seed);

/// Trapezoidal int ((bx - by) / h)^2 over the grid.
double g_functional(const BridgePair& pair);
/// The same rule applied to 2 (u - C_rho(u,u)) / h^2: the exact mean of
/// g_functional for Gaussian draws on this grid.
double expected_g_functional(const GridSpec& grid, Correlation rho);

enum class Mechanism { kGaussianGrid, kEmpiricalCoupling };
std::string_view to_string(Mechanism m);
Mechanism mechanism_from_string(std::string_view s);

struct LimitSample {
  std::vector<double> values;
  Correlation rho{0.0};
  Mechanism mechanism = Mechanism::kGaussianGrid;
  GridSpec grid;
  std::uint64_t seed = 0;
};

struct LimitSampleOptions {
  std::size_t m_sample = 10000;   // coupling mechanism only
  unsigned workers = 1;
  bool allow_independent = false;  // rho = 0 divergence demonstration
};

/// n_draws functional values; draw i uses stream i of the mechanism's family.
LimitSample sample_limit_law(Correlation rho, const GridSpec& grid, std::size_t n_draws,
                             Mechanism mechanism, std::uint64_t seed,
                             const LimitSampleOptions& opts = {});

}  // namespace w2lab

#endif  // W2LAB_BRIDGE_HPP_
