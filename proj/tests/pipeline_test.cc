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
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "sentinel/core/error.h"
#include "sentinel/graph/graph_store.h"
#include "sentinel/ingestion/simulator.h"
#include "sentinel/pipeline/bundle.h"
#include "sentinel/pipeline/config.h"
#include "sentinel/pipeline/features.h"
#include "sentinel/pipeline/observation_store.h"
#include "sentinel/pipeline/order.h"
#include "sentinel/pipeline/outliers.h"
#include "sentinel/pipeline/scheduler.h"
#include "sentinel/pipeline/toml.h"
#include "sentinel/pipeline/update.h"

namespace sentinel::pipeline {
namespace {

using Rows = std::vector<std::vector<double>>;

using nlohmann::json;
using K = ComponentKind;

TEST(TomlTest, ParsesTheConfigSubset) {
  const auto doc = ParseToml(R"(
# comment
title = "sentinel"   # trailing
[pipeline]
update_models_interval_s = 30.5
seed = 7
enabled = true
order = ["Container", 'Pod',
         "Node"]

[kinds.Pod]
features = ["cpu_usage"]
iforest = { n_estimators = 20, bootstrap = false }

[[live.queries]]
metric_name = "cpu_usage"
[[live.queries]]
metric_name = "mem_usage"
"quoted key" = -3
a.b.c = 1e3
)");
  EXPECT_EQ(doc["title"], "sentinel");
  EXPECT_EQ(doc["pipeline"]["update_models_interval_s"], 30.5);
  EXPECT_EQ(doc["pipeline"]["seed"], 7);
  EXPECT_EQ(doc["pipeline"]["enabled"], true);
  EXPECT_EQ(doc["pipeline"]["order"].size(), 3u);
  EXPECT_EQ(doc["kinds"]["Pod"]["iforest"]["n_estimators"], 20);
  ASSERT_EQ(doc["live"]["queries"].size(), 2u);
  EXPECT_EQ(doc["live"]["queries"][1]["quoted key"], -3);
  EXPECT_EQ(doc["live"]["queries"][1]["a"]["b"]["c"], 1000.0);
}

TEST(TomlTest, ErrorsCarryTheLine) {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      ParseToml(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("a = 1\nb = \n"), 2u);
  EXPECT_EQ(line_of("a = 1\n[t]\nx = \"open\n"), 3u);
  EXPECT_EQ(line_of("a = 1\na = 2\n"), 2u);
  EXPECT_EQ(line_of("[x\n"), 1u);
  EXPECT_THROW(ParseTomlFile("/nonexistent.toml"), Error);
}

TEST(ConfigTest, DefaultsAreValid) {
  const auto config = PipelineConfig::Default();
  EXPECT_TRUE(ValidateConfig(config).empty());
  EXPECT_EQ(config.update_graph_interval_s, 1.0);
  EXPECT_EQ(config.update_models_interval_s, 60.0);
  const auto& pod = config.kinds.at(K::kPod);
  EXPECT_EQ(pod.mode, PolicyMode::kModeled);
  EXPECT_EQ(pod.unsupervised.kind, models::UnsupervisedKind::kIsolationForest);
  EXPECT_EQ(pod.supervised.kind, models::SupervisedKind::kDecisionTree);
  EXPECT_EQ(pod.supervised.dtree.criterion, models::SplitCriterion::kEntropy);
  EXPECT_EQ(pod.supervised.dtree.max_depth, 35);
  EXPECT_EQ(pod.unsupervised.iforest.n_estimators, 300);
  EXPECT_EQ(config.kinds.at(K::kReplicaSet).mode, PolicyMode::kAggregator);
  EXPECT_EQ(config.kinds.at(K::kLabel).mode, PolicyMode::kDisabled);
}

TEST(ConfigTest, JsonRoundTrip) {
  auto config = PipelineConfig::Default();
  config.seed = 42;
  config.kinds[K::kNode].supervised.kind = models::SupervisedKind::kSvm;
  config.evaluation_order = EvaluationOrder(config.kinds);
  const auto doc = ConfigToJson(config);
  EXPECT_EQ(ConfigToJson(ConfigFromJson(doc)), doc);
}

TEST(ConfigTest, ReportsEveryBadField) {
  const json doc = {
      {"pipeline", {{"update_graph_interval_s", -1}, {"bogus", 1}}},
      {"outliers", {{"fraction", 0.9}}},
      {"kinds", {{"Pod", {{"features", json::array()}, {"neighbor_features", json::array()}}},
                 {"Gizmo", json::object()}}}};
  try {
    ConfigFromJson(doc);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
    std::set<std::string> fields;
    for (const auto& f : e.fields()) fields.insert(f.field);
    EXPECT_TRUE(fields.count("pipeline.bogus")) << e.what();
    EXPECT_TRUE(fields.count("kinds.Gizmo")) << e.what();
  }
  try {
    ConfigFromJson(json{{"pipeline", {{"update_graph_interval_s", -1}}},
                        {"outliers", {{"fraction", 0.9}}}});
    FAIL();
  } catch (const ConfigError& e) {
    std::set<std::string> fields;
    for (const auto& f : e.fields()) fields.insert(f.field);
    EXPECT_TRUE(fields.count("pipeline.update_graph_interval_s"));
    EXPECT_TRUE(fields.count("outliers.fraction"));
  }
}

TEST(ConfigTest, LoadsTomlFiles) {
  const auto path = (std::filesystem::temp_directory_path() /
                     ("cfg-" + std::to_string(::getpid()) + ".toml")).string();
  {
    std::ofstream out(path);
    out << "[pipeline]\nupdate_models_interval_s = 5\n"
           "[kinds.Pod]\nsupervised = \"logreg\"\nlogreg = { C = 2.0 }\n"
           "[simulator]\nnode_count = 2\n";
  }
  const auto config = LoadConfigFile(path);
  EXPECT_EQ(config.update_models_interval_s, 5.0);
  EXPECT_EQ(config.kinds.at(K::kPod).supervised.kind, models::SupervisedKind::kLogisticRegression);
  EXPECT_EQ(config.kinds.at(K::kPod).supervised.logreg.c, 2.0);
  EXPECT_EQ(config.simulator.node_count, 2);
  std::filesystem::remove(path);
  EXPECT_THROW(LoadConfigFile(path), Error);
}

TEST(OrderTest, DefaultOrderIsBottomUp) {
  const auto config = PipelineConfig::Default();
  const auto order = EvaluationOrder(config.kinds);
  auto pos = [&](K k) { return std::find(order.begin(), order.end(), k) - order.begin(); };
  EXPECT_LT(pos(K::kPod), pos(K::kReplicaSet));
  EXPECT_LT(pos(K::kReplicaSet), pos(K::kDeployment));
  EXPECT_LT(pos(K::kDeployment), pos(K::kNamespace));
  EXPECT_LT(pos(K::kNamespace), pos(K::kCluster));
  EXPECT_EQ(std::find(order.begin(), order.end(), K::kLabel), order.end());
  EXPECT_EQ(CheckOrder(order, config.kinds), "");
  std::vector<K> reversed(order.rbegin(), order.rend());
  EXPECT_NE(CheckOrder(reversed, config.kinds), "");
}

TEST(OrderTest, ScoreCyclesAreRejected) {
  auto config = PipelineConfig::Default();
  config.kinds[K::kPod].neighbor_features.push_back(
      {EdgeType::kRunsOn, Direction::kOut, "score", Aggregation::kMax});
  config.kinds[K::kNode].neighbor_features.push_back(
      {EdgeType::kRunsOn, Direction::kIn, "score", Aggregation::kMean});
  try {
    EvaluationOrder(config.kinds);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCyclicPolicy);
    EXPECT_NE(e.detail().find("Pod"), std::string::npos);
    EXPECT_NE(e.detail().find("Node"), std::string::npos);
  }
  EXPECT_FALSE(ValidateConfig(config).empty());
  // One direction alone is fine and orders Node before Pod.
  config.kinds[K::kNode].neighbor_features.clear();
  const auto order = EvaluationOrder(config.kinds);
  EXPECT_LT(std::find(order.begin(), order.end(), K::kNode),
            std::find(order.begin(), order.end(), K::kPod));
}

TEST(OrderTest, NeighborKindsFollowTheResourceModel) {
  EXPECT_EQ(NeighborKinds(K::kReplicaSet, EdgeType::kManages, Direction::kOut),
            std::set<K>{K::kPod});
  EXPECT_TRUE(NeighborKinds(K::kPod, EdgeType::kRunsOn, Direction::kOut).count(K::kNode));
}

graph::GraphSnapshot SmallGraph() {
  graph::GraphStore g;
  g.UpsertNode({"node-a", K::kNode, "a", {{"cpu_util", 2.0}, {"mem_util", 4.0}}, {}, {}, 0});
  g.UpsertNode({"node-b", K::kNode, "b", {{"cpu_util", 6.0}}, 0.8, ScoreSource::kModel, 0});
  g.UpsertNode({"p1", K::kPod, "p1", {{"cpu_usage", 0.1}, {"mem_usage", 1}, {"net_rx", 2},
                                      {"net_tx", 3}}, 0.2, ScoreSource::kModel, 0});
  g.UpsertNode({"p2", K::kPod, "p2", {{"cpu_usage", 0.3}, {"mem_usage", 1}, {"net_rx", 2},
                                      {"net_tx", 3}}, 0.6, ScoreSource::kModel, 0});
  g.UpsertNode({"p3", K::kPod, "p3", {{"cpu_usage", 0.3}}, {}, {}, 0});
  g.UpsertNode({"rs", K::kReplicaSet, "rs", {}, {}, {}, 0});
  g.UpsertNode({"rs-empty", K::kReplicaSet, "rs-empty", {}, 0.5, ScoreSource::kAggregate, 0});
  g.AddEdge({"p1", "node-a", EdgeType::kRunsOn, 0});
  g.AddEdge({"p2", "node-a", EdgeType::kRunsOn, 0});
  g.AddEdge({"p2", "node-b", EdgeType::kRunsOn, 0});
  g.AddEdge({"rs", "p1", EdgeType::kManages, 0});
  g.AddEdge({"rs", "p2", EdgeType::kManages, 0});
  return g.Snapshot();
}

TEST(FeaturesTest, OwnAndNeighbourColumns) {
  const auto snapshot = SmallGraph();
  GraphView view(snapshot);
  auto policy = DefaultPolicy(K::kPod);
  policy.neighbor_features.push_back({EdgeType::kRunsOn, Direction::kOut, "mem_util",
                                      Aggregation::kMax});
  policy.neighbor_features.push_back({EdgeType::kRunsOn, Direction::kOut, "score",
                                      Aggregation::kSum});
  const auto f = ExtractFeatures(view, policy);
  EXPECT_EQ(f.columns.size(), 8u);
  EXPECT_EQ(f.columns[4], "RUNS_ON.out.cpu_util.mean");
  EXPECT_EQ(f.ids, (std::vector<std::string>{"p1", "p2"}));
  ASSERT_EQ(f.excluded.size(), 1u);
  EXPECT_EQ(f.excluded[0].node_id, "p3");
  EXPECT_DOUBLE_EQ(f.x(0, 4), 2.0);
  EXPECT_DOUBLE_EQ(f.x(1, 4), 4.0);  // mean over node-a and node-b
  EXPECT_DOUBLE_EQ(f.x(1, 5), 4.0);  // node-b has no mem_util
  EXPECT_DOUBLE_EQ(f.x(1, 6), 4.0);
  EXPECT_DOUBLE_EQ(f.x(0, 7), 0.0);  // node-a unscored: zero filled
  EXPECT_DOUBLE_EQ(f.x(1, 7), 0.8);
  EXPECT_FALSE(f.zero_filled.empty());
  EXPECT_TRUE(ExtractFeatures(view, DefaultPolicy(K::kContainer)).no_nodes);
}

TEST(FeaturesTest, OverlayScoresWin) {
  const auto snapshot = SmallGraph();
  GraphView view(snapshot);
  EXPECT_EQ(view.Score("p1"), 0.2);
  view.OverlayScore("p1", 0.9);
  view.OverlayScore("node-b", std::nullopt);
  EXPECT_EQ(view.Score("p1"), 0.9);
  EXPECT_EQ(view.Score("node-b"), std::nullopt);
  EXPECT_DOUBLE_EQ(Aggregate(Aggregation::kMean, {1, 2, 6}), 3.0);
  EXPECT_DOUBLE_EQ(Aggregate(Aggregation::kMax, {1, 2, 6}), 6.0);
  EXPECT_DOUBLE_EQ(Aggregate(Aggregation::kSum, {1, 2, 6}), 9.0);
}

TEST(UpdateGraphTest, AggregatorsTakeTheMeanAndClearWhenUnscored) {
  graph::GraphStore g;
  g.LoadSnapshot(SmallGraph());
  auto config = PipelineConfig::Default();
  config.kinds[K::kPod].mode = PolicyMode::kDisabled;
  config.kinds[K::kNode].mode = PolicyMode::kDisabled;
  config.kinds[K::kContainer].mode = PolicyMode::kDisabled;
  BundleRegistry bundles;
  ObservationStore obs(100);
  const auto report = UpdateGraph(g, bundles, obs, config, 5.0);
  EXPECT_DOUBLE_EQ(g.GetNode("rs").anomaly_score.value(), 0.4);
  EXPECT_EQ(g.GetNode("rs").score_source, ScoreSource::kAggregate);
  EXPECT_FALSE(g.GetNode("rs-empty").anomaly_score.has_value());
  const auto* rs = report.Find(K::kReplicaSet);
  ASSERT_NE(rs, nullptr);
  EXPECT_EQ(rs->cleared, std::vector<std::string>{"rs-empty"});
}

TEST(UpdateGraphTest, MissingBundleIsReportedAndRowsRecorded) {
  graph::GraphStore g;
  g.LoadSnapshot(SmallGraph());
  BundleRegistry bundles;
  ObservationStore obs(100);
  const auto report = UpdateGraph(g, bundles, obs, PipelineConfig::Default(), 1.0);
  const auto* pod = report.Find(K::kPod);
  ASSERT_NE(pod, nullptr);
  EXPECT_EQ(pod->error, ErrorCode::kMissingBundle);
  EXPECT_EQ(obs.size(K::kPod), 2u);
  EXPECT_EQ(g.GetNode("p1").anomaly_score, 0.2);  // untouched
}

TEST(OutlierTest, CountsAndShifts) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(5.0, 2.0);
  std::vector<std::vector<double>> rows(100, std::vector<double>(3));
  for (auto& r : rows) {
    r[0] = g(rng);
    r[1] = g(rng);
    r[2] = 1.0;  // constant
  }
  const models::FeatureMatrix x(rows);
  const std::vector<bool> labels(100, false);
  const auto result = InjectSyntheticOutliers(x, labels, OutlierInjectionConfig{}, 9);
  ASSERT_EQ(result.sources.size(), 3u);  // max(3, ceil(0.02 * 100))
  EXPECT_EQ(result.data.x.rows(), 103u);
  std::set<std::size_t> distinct(result.sources.begin(), result.sources.end());
  EXPECT_EQ(distinct.size(), 3u);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto col = x.Column(j);
    double mean = 0.0, var = 0.0;
    for (double v : col) mean += v / 100;
    for (double v : col) var += (v - mean) * (v - mean) / 100;
    for (std::size_t s = 0; s < 3; ++s) {
      const double shift = result.data.x(100 + s, j) - x(result.sources[s], j);
      EXPECT_NEAR(std::abs(shift), 3.0 * std::sqrt(var), 1e-9);
    }
  }
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_EQ(result.data.x(100 + s, 2), 1.0);
    EXPECT_TRUE(result.data.y[100 + s]);
  }
  std::vector<std::vector<double>> big(1000, {0.0});
  for (std::size_t i = 0; i < big.size(); ++i) big[i][0] = static_cast<double>(i);
  EXPECT_EQ(InjectSyntheticOutliers(models::FeatureMatrix(big), std::vector<bool>(1000, false),
                                    OutlierInjectionConfig{}, 1)
                .sources.size(),
            20u);
  try {
    InjectSyntheticOutliers(models::FeatureMatrix(Rows{{1.0}, {2.0}}), {false, false},
                            OutlierInjectionConfig{}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewRows);
  }
}

models::FeatureMatrix PodHistory(std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> out(rows, std::vector<double>(6));
  for (auto& r : out)
    for (auto& v : r) v = 10.0 + g(rng);
  return models::FeatureMatrix(out);
}

TEST(BundleTest, RegistryVersionsAndSharedReaders) {
  auto config = PipelineConfig::Default();
  config.kinds[K::kPod].unsupervised.iforest.n_estimators = 50;
  const auto& policy = config.kinds.at(K::kPod);
  const auto x = PodHistory(80, 1);
  BundleRegistry registry;
  const auto first = registry.Publish(TrainBundle(policy, x, config, 1.0));
  EXPECT_EQ(first->version, 1);
  const auto held = registry.Get(K::kPod);
  const auto second = registry.Publish(TrainBundle(policy, x, config, 2.0));
  EXPECT_EQ(second->version, 2);
  EXPECT_EQ(held->version, 1);
  EXPECT_EQ(held->trained_at, 1.0);
  EXPECT_EQ(registry.Get(K::kPod)->version, 2);

  const auto round = ModelBundle::FromJson(second->ToJson());
  EXPECT_EQ(round.feature_names, second->feature_names);
  EXPECT_EQ(round.fingerprint, MatrixFingerprint(x));
  const auto z = second->standardizer.Transform(x);
  EXPECT_EQ(round.classifier.PredictProba(round.standardizer.Transform(x)),
            second->classifier.PredictProba(z));
  EXPECT_FALSE(second->Summary().contains("model"));
  EXPECT_FALSE(second->Summary().contains("standardizer"));
  EXPECT_EQ(second->training_rows, 80u);
}

TEST(BundleTest, TrainingIsDeterministic) {
  auto config = PipelineConfig::Default();
  config.kinds[K::kPod].unsupervised.iforest.n_estimators = 50;
  const auto x = PodHistory(60, 2);
  const auto a = TrainBundle(config.kinds.at(K::kPod), x, config, 0.0);
  const auto b = TrainBundle(config.kinds.at(K::kPod), x, config, 0.0);
  EXPECT_EQ(a.ToJson(), b.ToJson());
}

TEST(UpdateModelsTest, KindsTrainIndependently) {
  auto config = PipelineConfig::Default();
  config.kinds[K::kPod].unsupervised.iforest.n_estimators = 50;
  config.kinds[K::kNode].unsupervised.iforest.n_estimators = 50;
  const auto pod_columns = config.kinds.at(K::kPod).FeatureNames();
  const auto node_columns = config.kinds.at(K::kNode).FeatureNames();
  ObservationStore obs(1000);
  const auto pods = PodHistory(60, 5);
  for (std::size_t i = 0; i < pods.rows(); ++i) {
    obs.Append(K::kPod, pod_columns,
               {0.0, "p" + std::to_string(i), {pods.row(i).begin(), pods.row(i).end()}});
  }
  for (int i = 0; i < 5; ++i) obs.Append(K::kNode, node_columns, {0.0, "n", {1.0, 2.0, 3.0}});
  BundleRegistry bundles;
  const auto report = UpdateModels(obs, bundles, config, 10.0);
  EXPECT_EQ(report.Find(K::kPod)->status, TrainingStatus::kTrained);
  EXPECT_EQ(report.Find(K::kPod)->version, 1);
  const auto* node = report.Find(K::kNode);
  EXPECT_EQ(node->status, TrainingStatus::kInsufficientData);
  EXPECT_EQ(node->rows, 5u);
  EXPECT_EQ(node->needed, 30u);
  EXPECT_FALSE(report.all_trained());
  EXPECT_EQ(bundles.Get(K::kNode), nullptr);

  // A later shortfall keeps the previous bundle live.
  obs.Clear();
  for (int i = 0; i < 3; ++i) {
    obs.Append(K::kPod, pod_columns, {0.0, "p", {pods.row(i).begin(), pods.row(i).end()}});
  }
  const auto again = UpdateModels(obs, bundles, config, 20.0);
  EXPECT_EQ(again.Find(K::kPod)->status, TrainingStatus::kInsufficientData);
  EXPECT_EQ(again.Find(K::kPod)->version, 1);
  EXPECT_EQ(bundles.Get(K::kPod)->version, 1);
}

TEST(ObservationStoreTest, EvictsOldestAndResetsOnColumnChange) {
  ObservationStore store(3);
  for (int i = 0; i < 5; ++i) store.Append(K::kPod, {"a"}, {double(i), "p", {double(i)}});
  ASSERT_EQ(store.size(K::kPod), 3u);
  EXPECT_EQ(store.Rows(K::kPod).front().ts, 2.0);
  store.set_capacity(2);
  EXPECT_EQ(store.Rows(K::kPod).front().ts, 3.0);
  store.Append(K::kPod, {"a", "b"}, {9.0, "p", {1.0, 2.0}});
  EXPECT_EQ(store.size(K::kPod), 1u);
  EXPECT_EQ(store.Columns(K::kPod), (std::vector<std::string>{"a", "b"}));
  EXPECT_FALSE(store.Matrix(K::kNode).has_value());
}

TEST(SchedulerTest, SimulatedRunCountsTicks) {
  ManualClock clock;
  std::vector<Timestamp> graph_at, models_at;
  std::vector<std::string> sequence;
  Scheduler scheduler(
      clock, 1.0, 10.0,
      [&](Timestamp t) {
        graph_at.push_back(t);
        sequence.push_back("g" + std::to_string(int(t)));
      },
      [&](Timestamp t) {
        models_at.push_back(t);
        sequence.push_back("m" + std::to_string(int(t)));
      });
  scheduler.RunSimulated(clock, 0.0, 30.0);
  EXPECT_EQ(graph_at.size(), 30u);
  EXPECT_EQ(models_at, (std::vector<Timestamp>{0.0, 10.0, 20.0}));
  EXPECT_EQ(sequence[0], "g0");
  EXPECT_EQ(sequence[1], "m0");
  EXPECT_EQ(scheduler.tick_count(Lane::kGraph), 30u);
  EXPECT_EQ(scheduler.tick_count(Lane::kModels), 3u);
  EXPECT_THROW(Scheduler(clock, 0.0, 1.0, nullptr, nullptr), Error);
}

TEST(SchedulerTest, TaskErrorsAreReportedAndDoNotStopTheLane) {
  ManualClock clock;
  std::vector<std::string> errors;
  int calls = 0;
  Scheduler scheduler(
      clock, 1.0, 100.0,
      [&](Timestamp) {
        ++calls;
        throw Error(ErrorCode::kHttpError, "down");
      },
      [](Timestamp) {}, [&](Lane lane, const std::string& msg) {
        errors.push_back(std::string(LaneName(lane)) + ":" + msg);
      });
  scheduler.RunSimulated(clock, 0.0, 3.0);
  EXPECT_EQ(calls, 3);
  ASSERT_EQ(errors.size(), 3u);
  EXPECT_NE(errors[0].find("HttpError"), std::string::npos);
}

TEST(SchedulerTest, TryRunNowRefusesABusyLane) {
  SystemClock clock;
  std::atomic<bool> release{false};
  std::atomic<bool> entered{false};
  Scheduler scheduler(
      clock, 100.0, 100.0,
      [&](Timestamp) {
        entered = true;
        while (!release) std::this_thread::sleep_for(std::chrono::milliseconds(1));
      },
      [](Timestamp) {});
  std::thread worker([&] { EXPECT_TRUE(scheduler.TryRunNow(Lane::kGraph)); });
  while (!entered) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  EXPECT_FALSE(scheduler.TryRunNow(Lane::kGraph));
  EXPECT_TRUE(scheduler.TryRunNow(Lane::kModels));
  release = true;
  worker.join();
}

TEST(SchedulerTest, ThreadedLanesTick) {
  SystemClock clock;
  std::atomic<int> graph{0};
  Scheduler scheduler(clock, 0.01, 100.0, [&](Timestamp) { ++graph; }, [](Timestamp) {});
  scheduler.Start();
  std::this_thread::sleep_for(std::chrono::milliseconds(200));
  scheduler.Stop();
  EXPECT_FALSE(scheduler.running());
  EXPECT_GE(graph.load(), 5);
}

TEST(EndToEndTest, SimulatedClusterGetsScored) {
  auto config = PipelineConfig::Default();
  config.kinds[K::kPod].unsupervised.iforest.n_estimators = 50;
  config.kinds[K::kNode].unsupervised.iforest.n_estimators = 50;
  config.kinds[K::kContainer].unsupervised.iforest.n_estimators = 50;
  ingestion::ClusterSimulator sim(config.simulator);
  graph::GraphStore g(config.Schema());
  g.LoadSnapshot(sim.Topology());
  BundleRegistry bundles;
  ObservationStore obs(config.max_observations);
  for (int t = 0; t < 40; ++t) {
    ingestion::ApplyMetricBatch(g, sim.Tick(t));
    UpdateGraph(g, bundles, obs, config, t);
  }
  const auto trained = UpdateModels(obs, bundles, config, 40);
  EXPECT_TRUE(trained.all_trained()) << trained.ToJson().dump();
  ingestion::ApplyMetricBatch(g, sim.Tick(40));
  const auto report = UpdateGraph(g, bundles, obs, config, 40);
  for (const auto& node : g.Snapshot().nodes) {
    const auto* policy = config.Policy(node.kind);
    if (policy->mode == PolicyMode::kDisabled) continue;
    ASSERT_TRUE(node.anomaly_score.has_value()) << node.id;
    EXPECT_GE(*node.anomaly_score, 0.0);
    EXPECT_LE(*node.anomaly_score, 1.0);
  }
  EXPECT_EQ(report.Find(K::kCluster)->scores.size(), 1u);
}

}  // namespace
}  // namespace sentinel::pipeline
