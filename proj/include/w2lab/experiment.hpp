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

// Seeded Monte Carlo runners and their CSV / JSON reports.
//
// Replication r of every experiment draws from stream r of the experiment's
// family, writes into slot r, and is aggregated in index order afterwards,
// so reports do not depend on the worker count.

#ifndef W2LAB_EXPERIMENT_HPP_
#define W2LAB_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace w2lab {

enum class ExperimentKind { kOneSample, kTwoSample, kLimitCompare, kExpansions, kIntegrals, kMoments };

std::string_view to_string(ExperimentKind k);
/// Accepts both one_sample and one-sample spellings.
ExperimentKind experiment_kind_from_string(std::string_view s);

struct DecompositionParams {
  double C = 1.0;
  double theta = 2.0;
  double gamma = 2.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kOneSample;
  std::vector<double> n;  // real so integral cuts like 1e32 fit; MC sizes must be integers
  std::size_t reps = 0;
  std::optional<double> rho;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::size_t grid_m = 256;
  std::optional<double> grid_delta;  // defaults to 1/n
  std::optional<DecompositionParams> decomposition;
  std::optional<std::size_t> m_sample;  // defaults to max(1e4, 10/delta)
  std::vector<std::size_t> k{0, 1, 2, 5};
  std::string output_path;

  /// Overlays the keys present in j onto *this.
  void merge_json(const nlohmann::json& j);
  /// Everything that determines the numbers; workers and output excluded.
  nlohmann::json canonical_json() const;
  /// FNV-1a of canonical_json().dump().
  std::uint64_t hash() const;
  /// Throws std::invalid_argument naming the missing or bad field.
  void validate() const;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::vector<Table> tables;
};

std::string to_csv(const Table& t);
/// Array of row objects keyed by the header.
nlohmann::json to_json(const Table& t);
/// Writes <dir>/<name>.csv and <dir>/<name>.json for every table.
void write_report(const Report& r, const std::string& dir);

/// W2^2(F_n, Phi) for reps standard normal samples of size n.
std::vector<double> one_sample_w2sq(std::size_t n, std::size_t reps, std::uint64_t seed,
                                    unsigned workers);
/// n W2^2(F_n, G_n) for reps pairs of samples with correlation rho.
std::vector<double> two_sample_scaled(std::size_t n, double rho, std::size_t reps,
                                      std::uint64_t seed, unsigned workers);

Report run_one_sample(const ExperimentConfig& cfg);
Report run_two_sample(const ExperimentConfig& cfg);
Report run_limit_compare(const ExperimentConfig& cfg);
Report run_expansions(const ExperimentConfig& cfg);
Report run_integrals(const ExperimentConfig& cfg);
Report run_moments(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg);

}  // namespace w2lab

#endif  // W2LAB_EXPERIMENT_HPP_
