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

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "sentinel/core/error.h"
#include "sentinel/models/classifier.h"
#include "sentinel/models/dbscan.h"
#include "sentinel/models/isolation_forest.h"
#include "sentinel/models/one_class_svm.h"

namespace sentinel::models {
namespace {

FeatureMatrix Gaussian(std::size_t n, std::size_t d, std::uint64_t seed, double mean = 0.0,
                       double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(mean, sd);
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& r : rows)
    for (auto& v : r) v = g(rng);
  return FeatureMatrix(std::move(rows));
}

TEST(IsolationForestTest, PathLengthNormaliser) {
  EXPECT_DOUBLE_EQ(AveragePathLength(2), 1.0);
  EXPECT_DOUBLE_EQ(AveragePathLength(1), 0.0);
  EXPECT_DOUBLE_EQ(HarmonicNumber(3), 1.0 + 0.5 + 1.0 / 3.0);
  // c(m) = 2 H(m - 1) - 2 (m - 1) / m
  EXPECT_NEAR(AveragePathLength(256), 2 * HarmonicNumber(255) - 2.0 * 255 / 256, 1e-12);
  EXPECT_DOUBLE_EQ(ScoreFromPathLength(AveragePathLength(256), 256), 0.5);
}

TEST(IsolationForestTest, FarOutlierGetsTheTopScore) {
  auto rows = std::vector<std::vector<double>>();
  const auto base = Gaussian(200, 3, 1);
  for (std::size_t i = 0; i < base.rows(); ++i) {
    rows.emplace_back(base.row(i).begin(), base.row(i).end());
  }
  rows[17] = {10.0, 10.0, 10.0};
  const FeatureMatrix x(rows);
  IsolationForestParams params;
  params.rng_seed = 5;
  const auto forest = IsolationForest::Fit(x, params);
  const auto scores = forest.Score(x);
  EXPECT_EQ(std::max_element(scores.begin(), scores.end()) - scores.begin(), 17);
  for (double s : scores) {
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
  const auto labeling = forest.Label(x, 0.01);
  EXPECT_TRUE(labeling.labels[17]);
  EXPECT_EQ(labeling.anomaly_count(), 2u);
}

TEST(IsolationForestTest, IdenticalRowsAreDegenerate) {
  const FeatureMatrix x(std::vector<std::vector<double>>(50, {1.0, 2.0}));
  const auto forest = IsolationForest::Fit(x, IsolationForestParams{});
  EXPECT_TRUE(forest.degenerate());
  const auto scores = forest.Score(x);
  for (double s : scores) EXPECT_EQ(s, scores[0]);
  EXPECT_EQ(forest.Label(x, 0.1).anomaly_count(), 0u);
}

TEST(IsolationForestTest, ContaminationSetsAnomalyCount) {
  const auto x = Gaussian(1000, 4, 9);
  IsolationForestParams params;
  params.n_estimators = 100;
  params.max_samples = 256;
  const auto forest = IsolationForest::Fit(x, params);
  EXPECT_EQ(forest.psi(), 256u);
  EXPECT_EQ(forest.Label(x, 0.01).anomaly_count(), 10u);
  EXPECT_EQ(forest.Label(x, 0.1).anomaly_count(), 100u);
  EXPECT_THROW(forest.Label(x, 0.0), Error);
  EXPECT_THROW(forest.Label(x, 0.6), Error);
}

TEST(IsolationForestTest, SeededFitIsDeterministic) {
  const auto x = Gaussian(120, 3, 2);
  IsolationForestParams params;
  params.rng_seed = 77;
  EXPECT_EQ(IsolationForest::Fit(x, params).Score(x), IsolationForest::Fit(x, params).Score(x));
  const auto forest = IsolationForest::Fit(x, params);
  EXPECT_THROW(forest.Score(Gaussian(3, 2, 1)), Error);
}

TEST(IsolationForestTest, ParamValidation) {
  IsolationForestParams p;
  p.n_estimators = 0;
  EXPECT_THROW(p.Validate(), Error);
  p = {};
  p.max_features = 0.0;
  EXPECT_THROW(p.Validate(), Error);
  p = {};
  p.contamination = 0.7;
  EXPECT_THROW(p.Validate(), Error);
}

TEST(QuantileTest, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(Quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(Quantile({4, 1, 3, 2}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(Quantile({4, 1, 3, 2}, 0.0), 1.0);
}

// Reference DBSCAN: core points found by counting, clusters as connected
// components of the core graph ordered by their smallest core index, border
// points assigned to the lowest-numbered adjacent cluster.
std::vector<int> DbscanOracle(const FeatureMatrix& x, double eps, int min_samples) {
  const std::size_t n = x.rows();
  auto near = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += (x(a, j) - x(b, j)) * (x(a, j) - x(b, j));
    return s <= eps * eps;
  };
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) {
    int count = 0;
    for (std::size_t j = 0; j < n; ++j) count += near(i, j) ? 1 : 0;
    core[i] = count >= min_samples;
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (core[i] && core[j] && near(i, j)) parent[find(i)] = find(j);
  std::map<std::size_t, int> ids;
  std::vector<int> out(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    auto [it, inserted] = ids.emplace(find(i), static_cast<int>(ids.size()));
    out[i] = it->second;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (core[j] && near(i, j) && (out[i] < 0 || out[j] < out[i])) out[i] = out[j];
    }
  }
  return out;
}

TEST(DbscanTest, MatchesReferenceOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> n_dist(5, 50), d_dist(1, 5);
    std::uniform_real_distribution<double> eps_dist(0.2, 2.0);
    std::uniform_int_distribution<int> min_dist(1, 6);
    const auto n = n_dist(rng), d = d_dist(rng);
    const auto x = Gaussian(n, d, rng());
    const DbscanParams params{eps_dist(rng), min_dist(rng)};
    const auto got = DbscanLabel(x, params);
    const auto want = DbscanOracle(x, params.eps, params.min_samples);
    ASSERT_EQ(got.clusters, want) << "trial " << trial;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(got.labels[i], want[i] < 0);
      EXPECT_EQ(got.raw_scores[i], want[i] < 0 ? 1.0 : 0.0);
    }
  }
}

TEST(DbscanTest, TwoBlobsAndAFarPoint) {
  std::vector<std::vector<double>> rows;
  const auto a = Gaussian(30, 2, 1, 0.0, 0.2);
  const auto b = Gaussian(30, 2, 2, 10.0, 0.2);
  for (std::size_t i = 0; i < 30; ++i) rows.emplace_back(a.row(i).begin(), a.row(i).end());
  for (std::size_t i = 0; i < 30; ++i) rows.emplace_back(b.row(i).begin(), b.row(i).end());
  rows.push_back({50.0, -50.0});
  const auto result = DbscanLabel(FeatureMatrix(rows), {1.0, 4});
  EXPECT_EQ(result.clusters[0], 0);
  EXPECT_EQ(result.clusters[30], 1);
  EXPECT_EQ(result.clusters[60], -1);
  EXPECT_EQ(result.anomaly_count(), 1u);
}

TEST(DbscanTest, SparseDataIsAllNoise) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({i * 10.0});
  const auto result = DbscanLabel(FeatureMatrix(rows), {1.0, 2});
  EXPECT_EQ(result.anomaly_count(), 10u);
  EXPECT_THROW(DbscanLabel(FeatureMatrix(rows), {0.0, 2}), Error);
  EXPECT_THROW(DbscanLabel(FeatureMatrix(rows), {1.0, 0}), Error);
}

FeatureMatrix PositiveBlob(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(3.0, 0.5);
  std::vector<std::vector<double>> rows(n, std::vector<double>(3));
  for (auto& r : rows)
    for (auto& v : r) v = g(rng);
  return FeatureMatrix(rows);
}

TEST(OneClassSvmTest, NuBoundsTheOutsideFraction) {
  for (double nu : {0.05, 0.1, 0.3}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto x = PositiveBlob(200, seed);
      OcsvmParams params;
      params.nu = nu;
      const auto model = OneClassSvm::Fit(x, params);
      std::size_t below = 0;
      for (std::size_t i = 0; i < x.rows(); ++i) below += model.Decision(x.row(i)) < 0 ? 1 : 0;
      EXPECT_LT(static_cast<double>(below), nu * 200) << "nu " << nu << " seed " << seed;
      EXPECT_EQ(model.Label(x).anomaly_count(), below);
    }
  }
}

TEST(OneClassSvmTest, ObjectiveDoesNotExceedStart) {
  const auto x = PositiveBlob(100, 4);
  const auto model = OneClassSvm::Fit(x, OcsvmParams{});
  const std::vector<double> zero(3, 0.0);
  EXPECT_LE(OneClassSvm::Objective(x, model.weights(), model.rho(), 0.05),
            OneClassSvm::Objective(x, zero, 0.0, 0.05) + 1e-12);
}

TEST(OneClassSvmTest, PointNearTheOriginIsOutside) {
  const auto x = PositiveBlob(100, 8);
  const auto model = OneClassSvm::Fit(x, OcsvmParams{});
  const std::vector<double> probe_near = {0.1, 0.1, 0.1};
  EXPECT_LT(model.Decision(probe_near), 0.0);
}

TEST(OneClassSvmTest, DuplicatingTheDataKeepsTheNuProperty) {
  auto rows = std::vector<std::vector<double>>();
  const auto x = PositiveBlob(80, 12);
  for (int copy = 0; copy < 2; ++copy)
    for (std::size_t i = 0; i < x.rows(); ++i) rows.emplace_back(x.row(i).begin(), x.row(i).end());
  const FeatureMatrix doubled(rows);
  OcsvmParams params;
  params.nu = 0.1;
  const auto model = OneClassSvm::Fit(doubled, params);
  EXPECT_LT(static_cast<double>(model.Label(doubled).anomaly_count()), 0.1 * 160);
}

TEST(LabelerTest, RunLabelerDispatchesAndNamesParse) {
  const auto x = PositiveBlob(60, 1);
  for (const char* name : {"iforest", "dbscan", "ocsvm"}) {
    UnsupervisedConfig config;
    config.kind = ParseUnsupervised(name);
    EXPECT_EQ(UnsupervisedName(config.kind), name);
    const auto labeling = RunLabeler(x, config);
    EXPECT_EQ(labeling.labels.size(), 60u);
    EXPECT_EQ(labeling.raw_scores.size(), 60u);
  }
  EXPECT_THROW(ParseUnsupervised("kmeans"), Error);
}

TEST(LabelerTest, ParamsJsonRoundTrip) {
  IsolationForestParams p;
  ApplyParams(nlohmann::json{{"n_estimators", 50}, {"bootstrap", false}}, p);
  EXPECT_EQ(p.n_estimators, 50);
  EXPECT_FALSE(p.bootstrap);
  IsolationForestParams q;
  ApplyParams(ParamsToJson(p), q);
  EXPECT_EQ(ParamsToJson(q), ParamsToJson(p));
  EXPECT_THROW(ApplyParams(nlohmann::json{{"trees", 5}}, p), Error);
  EXPECT_THROW(ApplyParams(nlohmann::json{{"n_estimators", -1}}, p), Error);
  DbscanParams d;
  ApplyParams(nlohmann::json{{"eps", 0.5}}, d);
  EXPECT_DOUBLE_EQ(d.eps, 0.5);
}

}  // namespace
}  // namespace sentinel::models
