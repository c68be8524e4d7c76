/*
 * Copyright 2026 The Sentinel Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "sentinel/core/error.h"
#include "sentinel/tuning/benchmark.h"
#include "sentinel/tuning/metrics.h"
#include "sentinel/tuning/random_search.h"

namespace sentinel::tuning {
namespace {

using Rows = std::vector<std::vector<double>>;

using models::FeatureMatrix;

// Written straight from the definition with no shared helpers.
double SilhouetteOracle(const FeatureMatrix& x, const std::vector<int>& group) {
  const std::size_t n = x.rows();
  std::map<int, std::size_t> sizes;
  for (int g : group) sizes[g]++;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<int, double> sum;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double s = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) s += std::pow(x(i, k) - x(j, k), 2);
      sum[group[j]] += std::sqrt(s);
    }
    if (sizes[group[i]] == 1) continue;
    const double a = sum[group[i]] / static_cast<double>(sizes[group[i]] - 1);
    double b = INFINITY;
    for (const auto& [g, size] : sizes) {
      if (g != group[i]) b = std::min(b, sum[g] / static_cast<double>(size));
    }
    const double m = std::max(a, b);
    total += m > 0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(n);
}

TEST(SilhouetteTest, MatchesDefinitionOnRandomInstances) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> n_dist(3, 40), d_dist(1, 4);
    std::uniform_int_distribution<int> k_dist(2, 4);
    const auto n = n_dist(rng), d = d_dist(rng);
    const int k = k_dist(rng);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    std::vector<int> group(n);
    for (std::size_t i = 0; i < n; ++i) {
      group[i] = i < 2 ? static_cast<int>(i) : std::uniform_int_distribution<int>(0, k - 1)(rng);
      for (auto& v : rows[i]) v = g(rng) + group[i];
    }
    const FeatureMatrix x(rows);
    EXPECT_NEAR(SilhouetteScore(x, group), SilhouetteOracle(x, group), 1e-9) << "trial " << trial;
  }
}

TEST(SilhouetteTest, DegenerateGroupings) {
  const FeatureMatrix x(Rows{{0.0}, {1.0}, {2.0}});
  try {
    SilhouetteScore(x, std::vector<int>{0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateGrouping);
  }
  EXPECT_THROW(SilhouetteScore(FeatureMatrix(Rows{{0.0}, {1.0}}), std::vector<int>{0, 1}), Error);
  EXPECT_THROW(SilhouetteScore(x, std::vector<int>{0, 1}), Error);
}

TEST(SilhouetteTest, WellSeparatedGroupsScoreNearOne) {
  std::vector<std::vector<double>> rows;
  std::vector<int> group;
  for (int i = 0; i < 20; ++i) {
    rows.push_back({i * 0.01});
    group.push_back(0);
    rows.push_back({100.0 + i * 0.01});
    group.push_back(1);
  }
  EXPECT_GT(SilhouetteScore(FeatureMatrix(rows), group), 0.99);
}

TEST(SilhouetteTest, LabelingModes) {
  const FeatureMatrix x(Rows{{0.0}, {0.1}, {5.0}, {5.1}, {20.0}});
  models::AnomalyLabeling labeling;
  labeling.labels = {false, false, false, false, true};
  labeling.clusters = {0, 0, 1, 1, -1};
  EXPECT_NEAR(SilhouetteScore(x, labeling, SilhouetteMode::kBinary),
              SilhouetteOracle(x, {0, 0, 0, 0, 1}), 1e-12);
  EXPECT_NEAR(SilhouetteScore(x, labeling, SilhouetteMode::kPerCluster),
              SilhouetteOracle(x, {0, 0, 1, 1, -1}), 1e-12);
}

TEST(F1Test, ConfusionAndScore) {
  const std::vector<bool> truth = {true, true, false, false, true};
  const std::vector<bool> pred = {true, false, true, false, true};
  const auto c = Confusion(truth, pred);
  EXPECT_EQ(c.tp, 2u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.tn, 1u);
  EXPECT_DOUBLE_EQ(F1Score(c).value, 2.0 / 3.0);
  const auto none = F1Score(Confusion({false, false}, {false, false}));
  EXPECT_TRUE(none.undefined);
  EXPECT_EQ(none.value, 0.0);
  EXPECT_THROW(Confusion({true}, {true, false}), Error);
}

SearchSpace Space() {
  SearchSpace space;
  space.Integer("k", 1, 10).Float("x", 0.0, 1.0).Float("lr", 1e-4, 1.0, true).Categorical(
      "mode", {"a", "b"});
  return space;
}

TEST(SearchSpaceTest, SamplesStayInDomain) {
  const auto space = Space();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto p = space.Sample(rng);
    EXPECT_GE(p["k"].get<int>(), 1);
    EXPECT_LE(p["k"].get<int>(), 10);
    EXPECT_GE(p["lr"].get<double>(), 1e-4);
    EXPECT_LE(p["lr"].get<double>(), 1.0);
    EXPECT_TRUE(p["mode"] == "a" || p["mode"] == "b");
  }
  EXPECT_THROW(SearchSpace().Validate(), Error);
  EXPECT_THROW(SearchSpace().Integer("k", 3, 1).Validate(), Error);
  EXPECT_THROW(SearchSpace().Float("lr", 0.0, 1.0, true).Validate(), Error);
}

TEST(RandomSearchTest, DeterministicAcrossParallelism) {
  const auto objective = [](const nlohmann::json& p) {
    return TrialOutcome{-std::abs(p["x"].get<double>() - 0.3), 0.0, 0.0};
  };
  const auto a = RandomSearch(Space(), objective, 40, 5, 1);
  const auto b = RandomSearch(Space(), objective, 40, 5, 4);
  ASSERT_EQ(a.trials.size(), 40u);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(a.trials[i].params, b.trials[i].params);
    EXPECT_EQ(a.trials[i].objective, b.trials[i].objective);
  }
  EXPECT_EQ(a.best, b.best);
  for (const auto& t : a.trials) EXPECT_LE(t.objective, a.best_trial().objective);
}

TEST(RandomSearchTest, TiesGoToTheEarliestTrial) {
  const auto result = RandomSearch(
      Space(), [](const nlohmann::json&) { return TrialOutcome{1.0, 0.0, 0.0}; }, 10, 0);
  EXPECT_EQ(result.best, 0u);
}

TEST(RandomSearchTest, FailedTrialsAreRecordedButSkipped) {
  int calls = 0;
  const auto result = RandomSearch(
      Space(),
      [&](const nlohmann::json& p) -> TrialOutcome {
        ++calls;
        if (p["k"].get<int>() % 2 == 0) throw Error(ErrorCode::kDegenerateGrouping, "one group");
        if (p["k"].get<int>() == 5) return {NAN, 0, 0};
        return {static_cast<double>(p["k"].get<int>()), 0.01, 0.02};
      },
      30, 3);
  EXPECT_EQ(calls, 30);
  std::size_t failed = 0;
  for (const auto& t : result.trials) {
    if (!t.failed) continue;
    ++failed;
    EXPECT_FALSE(t.error.empty());
  }
  EXPECT_EQ(result.successful() + failed, 30u);
  std::ostringstream table;
  WriteTrialTable(table, result.trials);
  std::size_t lines = 0;
  std::string line;
  std::istringstream in(table.str());
  std::getline(in, line);
  EXPECT_EQ(line, "trial,params_json,objective,fit_time_s,predict_time_s");
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, result.successful());

  const auto all_fail = RandomSearch(
      Space(), [](const nlohmann::json&) -> TrialOutcome { throw std::runtime_error("x"); }, 5, 0);
  EXPECT_FALSE(all_fail.best.has_value());
  EXPECT_THROW(all_fail.best_trial(), Error);
  EXPECT_THROW(BenchmarkReport("m", "f1", all_fail.trials), Error);
}

TEST(BenchmarkTest, ReportAndTable) {
  const auto result = RandomSearch(
      Space(), [](const nlohmann::json& p) { return TrialOutcome{p["x"].get<double>(), 0.5, 0.25}; },
      10, 2);
  const auto row = BenchmarkReport("iforest", "silhouette", result.trials);
  EXPECT_EQ(row.best_objective, result.best_trial().objective);
  EXPECT_EQ(row.best_params, result.best_trial().params);
  const auto table = FormatBenchmarkTable({row});
  EXPECT_NE(table.find("Model"), std::string::npos);
  EXPECT_NE(table.find("iforest"), std::string::npos);
  EXPECT_EQ(BenchmarkRowToJson(row)["model"], "iforest");
}

TEST(BenchmarkTest, SyntheticOutliersSitBelowTheBaseline) {
  SyntheticBenchmarkSpec spec;
  spec.rows = 500;
  const auto bench = MakeSyntheticBenchmark(spec);
  std::size_t outliers = 0;
  for (std::size_t i = 0; i < bench.x.rows(); ++i) {
    if (!bench.truth[i]) continue;
    ++outliers;
    for (std::size_t j = 0; j < bench.x.cols(); ++j) EXPECT_LT(bench.x(i, j), spec.mean - 3.0);
  }
  EXPECT_EQ(outliers, 10u);
}

TEST(FeatureTableTest, RoundTripWithLabels) {
  const auto path = (std::filesystem::temp_directory_path() /
                     ("table-" + std::to_string(::getpid()) + ".csv")).string();
  const FeatureMatrix x(Rows{{1.5, 2.0}, {3.0, -4.25}}, {"cpu", "mem"});
  const std::vector<bool> labels = {true, false};
  WriteFeatureTable(path, x, &labels);
  const auto table = ReadFeatureTable(path);
  EXPECT_EQ(table.x.values(), x.values());
  EXPECT_EQ(table.x.feature_names(), x.feature_names());
  ASSERT_TRUE(table.labels.has_value());
  EXPECT_EQ(*table.labels, labels);
  {
    std::ofstream out(path);
    out << "a,b\n1,2\n3,oops\n";
  }
  try {
    ReadFeatureTable(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(e.detail().find(":3:"), std::string::npos) << e.what();
  }
  std::remove(path.c_str());
  try {
    ReadFeatureTable(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

}  // namespace
}  // namespace sentinel::tuning
