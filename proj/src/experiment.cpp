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

#include "w2lab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "w2lab/bridge.hpp"
#include "w2lab/extremes.hpp"
#include "w2lab/gaussian.hpp"
#include "w2lab/integrals.hpp"
#include "w2lab/parallel.hpp"
#include "w2lab/rng.hpp"
#include "w2lab/stats.hpp"
#include "w2lab/wasserstein.hpp"

namespace w2lab {

using nlohmann::json;

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kOneSample: return "one_sample";
    case ExperimentKind::kTwoSample: return "two_sample";
    case ExperimentKind::kLimitCompare: return "limit_compare";
    case ExperimentKind::kExpansions: return "expansions";
    case ExperimentKind::kIntegrals: return "integrals";
    case ExperimentKind::kMoments: return "moments";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view s) {
  std::string t(s);
  std::replace(t.begin(), t.end(), '-', '_');
  for (auto k : {ExperimentKind::kOneSample, ExperimentKind::kTwoSample,
                 ExperimentKind::kLimitCompare, ExperimentKind::kExpansions,
                 ExperimentKind::kIntegrals, ExperimentKind::kMoments}) {
    if (t == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown experiment: " + std::string(s));
}

void ExperimentConfig::merge_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      kind = experiment_kind_from_string(value.get<std::string>());
    } else if (key == "n") {
      n.clear();
      if (value.is_array()) {
        for (const auto& x : value) n.push_back(x.get<double>());
      } else {
        n.push_back(value.get<double>());
      }
    } else if (key == "reps") {
      reps = value.get<std::size_t>();
    } else if (key == "rho") {
      rho = value.get<double>();
    } else if (key == "seed") {
      seed = value.get<std::uint64_t>();
    } else if (key == "workers") {
      workers = value.get<unsigned>();
    } else if (key == "grid") {
      if (value.contains("m")) grid_m = value.at("m").get<std::size_t>();
      if (value.contains("delta")) grid_delta = value.at("delta").get<double>();
    } else if (key == "decomposition") {
      DecompositionParams d = decomposition.value_or(DecompositionParams{});
      if (value.contains("C")) d.C = value.at("C").get<double>();
      if (value.contains("theta")) d.theta = value.at("theta").get<double>();
      if (value.contains("gamma")) d.gamma = value.at("gamma").get<double>();
      decomposition = d;
    } else if (key == "m_sample") {
      m_sample = value.get<std::size_t>();
    } else if (key == "k") {
      k = value.get<std::vector<std::size_t>>();
    } else if (key == "out") {
      output_path = value.get<std::string>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
}

json ExperimentConfig::canonical_json() const {
  json j;
  j["experiment"] = std::string(to_string(kind));
  j["n"] = n;
  j["reps"] = reps;
  j["rho"] = rho ? json(*rho) : json(nullptr);
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["grid"] = {{"m", grid_m}, {"delta", grid_delta ? json(*grid_delta) : json(nullptr)}};
  if (decomposition) {
    j["decomposition"] = {{"C", decomposition->C},
                          {"theta", decomposition->theta},
                          {"gamma", decomposition->gamma}};
  } else {
    j["decomposition"] = nullptr;
  }
  j["m_sample"] = m_sample ? json(*m_sample) : json(nullptr);
  j["k"] = k;
  return j;
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json().dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

bool is_count(double x) {
  return x >= 1.0 && x <= 1e9 && std::floor(x) == x;
}

bool needs_sample_sizes(ExperimentKind k) {
  return k == ExperimentKind::kOneSample || k == ExperimentKind::kTwoSample ||
         k == ExperimentKind::kLimitCompare || k == ExperimentKind::kMoments;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!seed) throw std::invalid_argument("config: seed is required");
  if (workers < 1) throw std::invalid_argument("config: workers must be at least 1");
  if (needs_sample_sizes(kind)) {
    if (n.empty()) throw std::invalid_argument("config: n is required for " + std::string(to_string(kind)));
    for (double x : n) {
      if (!is_count(x)) throw std::invalid_argument("config: n must be an integer in [1, 1e9]");
    }
    if (reps < 1) throw std::invalid_argument("config: reps must be at least 1");
  }
  if (kind == ExperimentKind::kTwoSample || kind == ExperimentKind::kLimitCompare) {
    if (!rho) throw std::invalid_argument("config: rho is required for " + std::string(to_string(kind)));
    Correlation check(*rho);
    if (reps < 2) throw std::invalid_argument("config: reps must be at least 2");
  }
  if (kind == ExperimentKind::kLimitCompare) {
    if (*rho == 0.0) {
      throw std::invalid_argument(
          "config: limit_compare needs rho != 0 (independent bridges give an infinite functional)");
    }
    if (n.size() != 1) throw std::invalid_argument("config: limit_compare takes a single n");
    if (reps < 25) throw std::invalid_argument("config: limit_compare needs reps >= 25");
  }
  if (kind == ExperimentKind::kMoments) {
    for (double x : n) {
      if (x < 3) throw std::invalid_argument("config: moments needs n >= 3");
    }
    if (reps < 2) throw std::invalid_argument("config: reps must be at least 2");
  }
  if (kind == ExperimentKind::kIntegrals) {
    for (double x : n) {
      if (!(x >= 8.0) || !std::isfinite(x)) throw std::invalid_argument("config: integrals need n >= 8");
    }
    if (rho) Correlation check(*rho);
  }
  if (grid_m < 16) throw std::invalid_argument("config: grid.m must be at least 16");
  if (grid_delta && !(*grid_delta > 0.0 && *grid_delta < 0.25)) {
    throw std::invalid_argument("config: grid.delta must lie in (0, 1/4)");
  }
}

std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

json to_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < t.header.size() && i < r.size(); ++i) {
      // numbers stay numbers where they parse cleanly
      char* end = nullptr;
      const double v = std::strtod(r[i].c_str(), &end);
      if (!r[i].empty() && end && *end == '\0' && std::isfinite(v)) {
        obj[t.header[i]] = v;
      } else {
        obj[t.header[i]] = r[i];
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

void write_report(const Report& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& t : r.tables) {
    const auto base = std::filesystem::path(dir) / t.name;
    std::ofstream csv(base.string() + ".csv", std::ios::binary);
    csv << to_csv(t);
    std::ofstream js(base.string() + ".json", std::ios::binary);
    js << to_json(t).dump(2) << '\n';
    if (!csv || !js) throw std::runtime_error("write_report: cannot write " + base.string());
  }
}

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "NA";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt(std::size_t x) { return std::to_string(x); }

std::string hex(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

struct RunTag {
  std::string seed;
  std::string reps;
  std::string hash;

  explicit RunTag(const ExperimentConfig& cfg)
      : seed(std::to_string(*cfg.seed)), reps(fmt(cfg.reps)), hash(hex(cfg.hash())) {}
  void append(std::vector<std::string>& row) const {
    row.push_back(seed);
    row.push_back(reps);
    row.push_back(hash);
  }
};

void add_run_header(std::vector<std::string>& h) {
  h.insert(h.end(), {"seed", "reps", "config_hash"});
}

double loglog(double n) { return n > std::exp(1.0) ? std::log(std::log(n)) : std::nan(""); }

struct OneSampleRep {
  double w2sq = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

std::vector<OneSampleRep> one_sample_reps(std::size_t n, std::size_t reps, std::uint64_t seed,
                                          unsigned workers,
                                          const std::optional<DecompositionParams>& dec) {
  const QuantileCellTable table(n);
  std::vector<OneSampleRep> out(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    RandomStream rng(seed, StreamFamily::kOneSample, r);
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    const auto s = SortedSample::from_unsorted(std::move(x));
    out[r].w2sq = w2sq_vs_gaussian(s, table);
    if (dec) {
      const auto parts = tail_decomposition(s, dec->C, dec->theta, dec->gamma);
      out[r].a = parts.a_n;
      out[r].b = parts.b_n;
      out[r].c = parts.c_n;
      out[r].d = parts.d_n;
    }
  });
  return out;
}

std::size_t as_count(double x) { return static_cast<std::size_t>(x); }

}  // namespace

std::vector<double> one_sample_w2sq(std::size_t n, std::size_t reps, std::uint64_t seed,
                                    unsigned workers) {
  const auto reps_out = one_sample_reps(n, reps, seed, workers, std::nullopt);
  std::vector<double> out;
  out.reserve(reps);
  for (const auto& r : reps_out) out.push_back(r.w2sq);
  return out;
}

std::vector<double> two_sample_scaled(std::size_t n, double rho, std::size_t reps,
                                      std::uint64_t seed, unsigned workers) {
  const double r = Correlation(rho).value();
  const double s = std::sqrt((1.0 - r) * (1.0 + r));
  std::vector<double> out(reps);
  parallel_for(reps, workers, [&](std::size_t k) {
    RandomStream rng(seed, StreamFamily::kTwoSample, k);
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = r * x[i] + s * rng.normal();
    }
    const auto sx = SortedSample::from_unsorted(std::move(x));
    const auto sy = SortedSample::from_unsorted(std::move(y));
    out[k] = static_cast<double>(n) * w2sq_two_sample(sx, sy);
  });
  return out;
}

Report run_one_sample(const ExperimentConfig& cfg) {
  cfg.validate();
  const RunTag prov(cfg);
  Table t;
  t.name = "one_sample";
  t.header = {"n", "mean_w2sq", "se_w2sq", "mean_w2", "se_w2", "ratio", "ratio_w2", "centered"};
  if (cfg.decomposition) {
    t.header.insert(t.header.end(), {"K", "n_mean_a", "n_mean_b", "n_mean_c", "n_mean_d"});
  }
  add_run_header(t.header);
  for (double nd : cfg.n) {
    const std::size_t n = as_count(nd);
    std::optional<DecompositionParams> dec;
    if (cfg.decomposition && n >= 3) dec = cfg.decomposition;
    const auto reps = one_sample_reps(n, cfg.reps, *cfg.seed, cfg.workers, dec);
    std::vector<double> sq;
    std::vector<double> w;
    for (const auto& r : reps) {
      sq.push_back(r.w2sq);
      w.push_back(std::sqrt(r.w2sq));
    }
    const auto m_sq = summarize(sq);
    const auto m_w = summarize(w);
    const double ll = loglog(nd);
    std::vector<std::string> row = {fmt(n),         fmt(m_sq.mean), fmt(m_sq.se_mean),
                                    fmt(m_w.mean),  fmt(m_w.se_mean),
                                    fmt(nd * m_sq.mean / ll),
                                    fmt(std::sqrt(nd / ll) * m_w.mean),
                                    fmt(nd * m_sq.mean - ll)};
    if (cfg.decomposition) {
      if (dec) {
        CompensatedSum a, b, c, d;
        for (const auto& r : reps) {
          a.add(r.a);
          b.add(r.b);
          c.add(r.c);
          d.add(r.d);
        }
        const double scale = nd / static_cast<double>(reps.size());
        const double K = std::floor(dec->C * std::pow(std::log(nd), dec->theta));
        row.insert(row.end(), {fmt(K), fmt(scale * a.value()), fmt(scale * b.value()),
                               fmt(scale * c.value()), fmt(scale * d.value())});
      } else {
        row.insert(row.end(), 5, "NA");
      }
    }
    prov.append(row);
    t.rows.push_back(std::move(row));
  }
  return {{t}};
}

Report run_two_sample(const ExperimentConfig& cfg) {
  cfg.validate();
  const RunTag prov(cfg);
  const double rho = *cfg.rho;
  Table t;
  t.name = "two_sample";
  t.header = {"rho", "n", "mean", "se_mean", "variance", "q05", "q50", "q95",
              "limit_truncated", "limit_delta", "normalized_independent"};
  add_run_header(t.header);
  for (double nd : cfg.n) {
    const std::size_t n = as_count(nd);
    const auto draws = two_sample_scaled(n, rho, cfg.reps, *cfg.seed, cfg.workers);
    const auto m = summarize(draws);
    // the untruncated limit mean is infinite; report the mass above delta
    const double delta = cfg.grid_delta.value_or(1.0 / nd);
    double truncated = std::nan("");
    if (delta < 0.5) truncated = truncated_second_moment(Correlation(rho), delta).value;
    const double indep = rho == 0.0 ? m.mean / (2.0 * loglog(nd)) : std::nan("");
    std::vector<std::string> row = {
        fmt(rho), fmt(n), fmt(m.mean), fmt(m.se_mean), fmt(m.variance),
        fmt(sample_quantile(draws, 0.05)), fmt(sample_quantile(draws, 0.5)),
        fmt(sample_quantile(draws, 0.95)), fmt(truncated), fmt(delta), fmt(indep)};
    prov.append(row);
    t.rows.push_back(std::move(row));
  }
  return {{t}};
}

Report run_limit_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  const RunTag prov(cfg);
  const double nd = cfg.n.front();
  const std::size_t n = as_count(nd);
  const Correlation rho(*cfg.rho);
  const double delta = cfg.grid_delta.value_or(1.0 / nd);
  const GridSpec grid = build_grid(cfg.grid_m, delta);
  LimitSampleOptions opts;
  // the coupling is only close to Gaussian where m_sample * u >> 1
  opts.m_sample = cfg.m_sample.value_or(
      std::max<std::size_t>(10000, static_cast<std::size_t>(std::ceil(10.0 / delta))));
  opts.workers = cfg.workers;

  const auto finite = two_sample_scaled(n, rho.value(), cfg.reps, *cfg.seed, cfg.workers);
  const auto gauss =
      sample_limit_law(rho, grid, cfg.reps, Mechanism::kGaussianGrid, *cfg.seed, opts);
  const auto coupled =
      sample_limit_law(rho, grid, cfg.reps, Mechanism::kEmpiricalCoupling, *cfg.seed, opts);
  const auto flipped = sample_limit_law(Correlation(-rho.value()), grid, cfg.reps,
                                        Mechanism::kGaussianGrid, *cfg.seed, opts);

  Table lim;
  lim.name = "limit";
  lim.header = {"rho", "mechanism", "m", "delta", "n_draws", "mean", "variance",
                "q05", "q50", "q95", "grid_expectation", "m_sample"};
  add_run_header(lim.header);
  for (const LimitSample* s : {&gauss, &coupled, &flipped}) {
    const auto m = summarize(s->values);
    std::vector<std::string> row = {
        fmt(s->rho.value()), std::string(to_string(s->mechanism)), fmt(grid.m), fmt(delta),
        fmt(s->values.size()), fmt(m.mean), fmt(m.variance),
        fmt(sample_quantile(s->values, 0.05)), fmt(sample_quantile(s->values, 0.5)),
        fmt(sample_quantile(s->values, 0.95)), fmt(expected_g_functional(grid, s->rho)),
        s->mechanism == Mechanism::kEmpiricalCoupling ? fmt(opts.m_sample) : "NA"};
    prov.append(row);
    lim.rows.push_back(std::move(row));
  }

  Table ks;
  ks.name = "ks";
  ks.header = {"label_a", "label_b", "n_a", "n_b", "ks_stat", "p_value"};
  add_run_header(ks.header);
  const std::string finite_label = "n_w2sq_n" + fmt(n);
  const std::string flip_label = "gaussian_grid_rho" + fmt(-rho.value());
  auto ks_row = [&](const std::string& la, const std::vector<double>& a,
                    const std::string& lb, const std::vector<double>& b) {
    const auto r = ks_two_sample(a, b);
    std::vector<std::string> row = {la, lb, fmt(a.size()), fmt(b.size()),
                                    fmt(r.statistic), fmt(r.p_value)};
    prov.append(row);
    ks.rows.push_back(std::move(row));
  };
  ks_row(finite_label, finite, "gaussian_grid", gauss.values);
  ks_row(finite_label, finite, "empirical_coupling", coupled.values);
  ks_row("gaussian_grid", gauss.values, "empirical_coupling", coupled.values);
  ks_row("gaussian_grid", gauss.values, flip_label, flipped.values);
  return {{lim, ks}};
}

Report run_expansions(const ExperimentConfig& cfg) {
  cfg.validate();
  const RunTag prov(cfg);
  Table t;
  t.name = "expansions";
  t.header = {"kind", "point", "L", "exact", "expansion", "ratio", "error_order"};
  add_run_header(t.header);
  auto add = [&](const std::string& kind, double point, double L, double exact,
                 double value, double order) {
    std::vector<std::string> row = {kind,       fmt(point),         fmt(L),    fmt(exact),
                                    fmt(value), fmt(exact / value), fmt(order)};
    prov.append(row);
    t.rows.push_back(std::move(row));
  };
  for (int j = 2; j <= 15; ++j) {
    const double v = std::pow(10.0, -j);
    const auto u = UnitProb::from_complement(v);
    const double q = std_normal_quantile(u);
    const auto e1 = quantile_tail_expansion(u);
    add("quantile", v, e1.L, q, e1.value, e1.relative_error_order);
    const auto e2 = quantile_tail_expansion_split(u);
    add("quantile_split", v, e2.L, q, e2.value, e2.relative_error_order);
    const auto e3 = h_tail_expansion(u);
    add("h", v, e3.L, density_quantile_h(u), e3.value, e3.relative_error_order);
    for (double a : {0.5, 2.0}) {
      const auto s = scaled_tail(a, u);
      const std::string name = a < 1 ? "scaled_tail_a0.5" : "scaled_tail_a2";
      add(name, v, e1.L, s.exact, s.asymptotic, e1.relative_error_order);
      add(name + "_corrected", v, e1.L, s.exact, s.corrected, e1.relative_error_order);
    }
  }
  for (double x = 2.0; x <= 30.0; x += 2.0) {
    const auto e = psi_expansion(x);
    add("psi", x, e.L, e.L, e.value, e.relative_error_order);
  }
  return {{t}};
}

Report run_integrals(const ExperimentConfig& cfg) {
  cfg.validate();
  const RunTag prov(cfg);
  const DecompositionParams dec = cfg.decomposition.value_or(DecompositionParams{});
  std::vector<double> ns = cfg.n;
  if (ns.empty()) ns = {1e4, 1e8, 1e16, 1e32};
  Table t;
  t.name = "integrals";
  t.header = {"kind", "n_or_rho", "value", "centered_or_ratio", "error_estimate", "evaluations"};
  add_run_header(t.header);
  auto add = [&](const std::string& kind, double key, double value, double aux, double err,
                 std::size_t evals) {
    std::vector<std::string> row = {kind, fmt(key), fmt(value), fmt(aux), fmt(err), fmt(evals)};
    prov.append(row);
    t.rows.push_back(std::move(row));
  };
  for (double n : ns) {
    const auto b = bickel_integral(n);
    add("bickel", n, b.integral.value, b.centered, b.integral.abs_error_estimate,
        b.integral.evaluations);
  }
  for (double n : ns) {
    const auto d = d1n(n, dec.C, dec.theta);
    add("d1n", n, d.integral.value, d.ratio, d.integral.abs_error_estimate,
        d.integral.evaluations);
  }
  if (cfg.rho) {
    const Correlation rho(*cfg.rho);
    try {
      const auto r = limit_second_moment(rho);
      add("limit_moment", rho.value(), r.value, std::nan(""), r.abs_error_estimate,
          r.evaluations);
    } catch (const DivergentIntegral& e) {
      add("limit_moment", rho.value(), std::numeric_limits<double>::infinity(),
          e.tail_value(), std::nan(""), 0);
    }
    // second column of the truncated rows is rho, the fourth the cut delta
    for (double delta : {1e-2, 1e-3, 1e-4, 1e-8, 1e-16}) {
      const auto r = truncated_second_moment(rho, delta);
      add("limit_moment_truncated", rho.value(), r.value, delta, r.abs_error_estimate,
          r.evaluations);
    }
  }
  return {{t}};
}

Report run_moments(const ExperimentConfig& cfg) {
  cfg.validate();
  Table t;
  t.name = "moments";
  t.header = {"n", "k", "variant", "mean_pred", "var_pred", "mc_mean", "mc_mean_se",
              "mc_var", "mc_var_se", "mean_z", "var_z", "mean_error_order", "var_error_order"};
  t.header.insert(t.header.end(), {"reps", "seed", "config_hash"});
  for (double nd : cfg.n) {
    const std::size_t n = as_count(nd);
    for (std::size_t k : cfg.k) {
      const auto mc = sample_extreme(n, k, cfg.reps, *cfg.seed, cfg.workers);
      for (auto variant : {IndexVariant::kAsStated, IndexVariant::kShifted}) {
        const auto pred = extreme_mean(n, k, variant);
        std::vector<std::string> row = {
            fmt(n), fmt(k), std::string(to_string(variant)), fmt(pred.mean_pred),
            fmt(pred.var_pred), fmt(mc.mean), fmt(mc.se_mean), fmt(mc.variance),
            fmt(mc.se_variance), fmt((mc.mean - pred.mean_pred) / mc.se_mean),
            fmt((mc.variance - pred.var_pred) / mc.se_variance), fmt(pred.mean_error_order),
            fmt(pred.var_error_order), fmt(cfg.reps), std::to_string(*cfg.seed),
            hex(cfg.hash())};
        t.rows.push_back(std::move(row));
      }
    }
  }
  return {{t}};
}

Report run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::kOneSample: return run_one_sample(cfg);
    case ExperimentKind::kTwoSample: return run_two_sample(cfg);
    case ExperimentKind::kLimitCompare: return run_limit_compare(cfg);
    case ExperimentKind::kExpansions: return run_expansions(cfg);
    case ExperimentKind::kIntegrals: return run_integrals(cfg);
    case ExperimentKind::kMoments: return run_moments(cfg);
  }
  throw std::invalid_argument("run_experiment: unknown kind");
}

}  // namespace w2lab
