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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "w2lab/experiment.hpp"
#include "w2lab/extremes.hpp"

using namespace w2lab;

namespace {

ExperimentConfig base(ExperimentKind k) {
  ExperimentConfig c;
  c.kind = k;
  c.seed = 17;
  return c;
}

std::string csv_of(const Report& r) {
  std::string out;
  for (const auto& t : r.tables) out += to_csv(t);
  return out;
}

struct CommandResult {
  int status;
  std::string output;
};

CommandResult run(const std::string& cmd) {
  std::array<char, 4096> buf;
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen((cmd + " 2>&1").c_str(), "r"), pclose);
  while (fgets(buf.data(), buf.size(), pipe.get())) out += buf.data();
  const int status = pclose(pipe.release());
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST(Config, Validation) {
  auto c = base(ExperimentKind::kOneSample);
  EXPECT_THROW(c.validate(), std::invalid_argument);  // no n
  c.n = {100};
  c.reps = 10;
  EXPECT_NO_THROW(c.validate());
  c.seed.reset();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  auto t = base(ExperimentKind::kTwoSample);
  t.n = {100};
  t.reps = 10;
  EXPECT_THROW(t.validate(), std::invalid_argument);  // rho missing
  t.rho = 1.0;
  EXPECT_THROW(t.validate(), std::domain_error);
  auto l = base(ExperimentKind::kLimitCompare);
  l.n = {1000};
  l.reps = 100;
  l.rho = 0.0;
  EXPECT_THROW(l.validate(), std::invalid_argument);
  c.seed = 1;
  c.n = {1.5};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, JsonMergeAndHash) {
  ExperimentConfig c;
  c.merge_json(nlohmann::json::parse(
      R"({"experiment":"two-sample","n":[1000,2000],"reps":5,"rho":0.6,"seed":9,
          "grid":{"m":64,"delta":0.001},"decomposition":{"C":2},"workers":3})"));
  EXPECT_EQ(c.kind, ExperimentKind::kTwoSample);
  EXPECT_EQ(c.n.size(), 2u);
  EXPECT_EQ(*c.rho, 0.6);
  EXPECT_EQ(c.grid_m, 64u);
  EXPECT_EQ(c.decomposition->C, 2.0);
  EXPECT_EQ(c.decomposition->theta, 2.0);
  EXPECT_EQ(c.workers, 3u);
  auto d = c;
  d.workers = 1;
  d.output_path = "elsewhere";
  EXPECT_EQ(c.hash(), d.hash());
  d.reps = 6;
  EXPECT_NE(c.hash(), d.hash());
  EXPECT_THROW(c.merge_json(nlohmann::json::parse(R"({"bogus":1})")), std::invalid_argument);
  EXPECT_THROW(experiment_kind_from_string("three-sample"), std::invalid_argument);
}

TEST(OneSample, SinglePointMeanIsTwo) {
  const auto w = one_sample_w2sq(1, 20000, 3, 1);
  const auto m = summarize(w);
  EXPECT_NEAR(m.mean, 2.0, 3 * m.se_mean);
}

TEST(Reports, DeterministicAcrossWorkers) {
  auto c = base(ExperimentKind::kOneSample);
  c.n = {50, 200};
  c.reps = 40;
  c.decomposition = DecompositionParams{};
  auto c4 = c;
  c4.workers = 4;
  EXPECT_EQ(csv_of(run_one_sample(c)), csv_of(run_one_sample(c4)));

  auto t = base(ExperimentKind::kTwoSample);
  t.n = {100};
  t.reps = 30;
  t.rho = 0.5;
  auto t3 = t;
  t3.workers = 3;
  EXPECT_EQ(csv_of(run_two_sample(t)), csv_of(run_two_sample(t3)));
}

TEST(Reports, RowsCarryRunTag) {
  auto c = base(ExperimentKind::kIntegrals);
  c.rho = 0.6;
  const auto r = run_integrals(c);
  const auto& t = r.tables.front();
  ASSERT_EQ(t.header.back(), "config_hash");
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(c.hash()));
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.back(), hash);
    EXPECT_EQ(row[row.size() - 3], "17");
  }
  // bickel, d1n for four n, one divergent limit row, five truncated rows
  EXPECT_EQ(t.rows.size(), 4u + 4u + 1u + 5u);
  EXPECT_EQ(t.rows[8][0], "limit_moment");
  EXPECT_EQ(t.rows[8][2], "inf");
}

TEST(Reports, JsonMirrorsCsv) {
  auto c = base(ExperimentKind::kExpansions);
  const auto r = run_expansions(c);
  const auto j = to_json(r.tables.front());
  ASSERT_EQ(j.size(), r.tables.front().rows.size());
  EXPECT_EQ(j[0]["kind"], "quantile");
  EXPECT_TRUE(j[0]["ratio"].is_number());
}

TEST(Cli, EndToEnd) {
  const char* cli = std::getenv("W2LAB_CLI");
  if (!cli) GTEST_SKIP() << "W2LAB_CLI not set";
  const auto dir = std::filesystem::temp_directory_path() / "w2lab_cli_test";
  std::filesystem::remove_all(dir);
  const std::string exe(cli);

  auto ok = run(exe + " integrals --seed 1 --rho 0.6 --out " + dir.string());
  EXPECT_EQ(ok.status, 0) << ok.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "integrals.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "integrals.json"));

  auto missing = run(exe + " one-sample --n 10 --reps 5");
  EXPECT_NE(missing.status, 0);
  EXPECT_EQ(missing.output.rfind("error: {", 0), 0u) << missing.output;
  EXPECT_NE(missing.output.find("seed"), std::string::npos);

  // CLI overrides the file
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"experiment":"one_sample","n":[20],"reps":4,"seed":3})";
  auto a = run(exe + " one-sample --config " + cfg.string());
  auto b = run(exe + " one-sample --config " + cfg.string() + " --reps 4 --workers 2");
  auto c = run(exe + " one-sample --config " + cfg.string() + " --reps 5");
  EXPECT_EQ(a.status, 0) << a.output;
  EXPECT_EQ(a.output, b.output);
  EXPECT_NE(a.output, c.output);
  auto bad = run(exe + " two-sample --seed 1 --n 10 --reps 5 --rho 1.5");
  EXPECT_NE(bad.status, 0);
  std::filesystem::remove_all(dir);
}
