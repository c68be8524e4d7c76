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

#include <random>
#include <thread>

#include "sentinel/core/error.h"
#include "sentinel/graph/graph_store.h"
#include "sentinel/graph/snapshot_json.h"

namespace sentinel::graph {
namespace {

GraphNode Node(std::string id, ComponentKind kind) {
  GraphNode n;
  n.id = std::move(id);
  n.kind = kind;
  n.name = n.id;
  return n;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

class GraphStoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    g.UpsertNode(Node("node-0", ComponentKind::kNode));
    g.UpsertNode(Node("pod-a", ComponentKind::kPod));
    g.UpsertNode(Node("pod-b", ComponentKind::kPod));
    g.UpsertNode(Node("c-0", ComponentKind::kContainer));
    g.AddEdge({"pod-a", "node-0", EdgeType::kRunsOn, 1.0});
    g.AddEdge({"pod-b", "node-0", EdgeType::kRunsOn, 1.0});
    g.AddEdge({"pod-a", "c-0", EdgeType::kContains, 1.0});
  }
  GraphStore g;
};

TEST_F(GraphStoreTest, NeighborsByDirection) {
  auto in = g.NeighborIds("node-0", EdgeType::kRunsOn, Direction::kIn);
  EXPECT_EQ(in, (std::vector<std::string>{"pod-a", "pod-b"}));
  EXPECT_TRUE(g.NeighborIds("node-0", EdgeType::kRunsOn, Direction::kOut).empty());
  EXPECT_EQ(g.NeighborIds("pod-a", EdgeType::kRunsOn, Direction::kBoth),
            std::vector<std::string>{"node-0"});
  EXPECT_TRUE(g.NeighborIds("pod-a", EdgeType::kManages, Direction::kBoth).empty());
}

TEST_F(GraphStoreTest, DuplicateEdgeIsNoOp) {
  g.AddEdge({"pod-a", "node-0", EdgeType::kRunsOn, 5.0});
  EXPECT_EQ(g.edge_count(), 3u);
}

TEST_F(GraphStoreTest, DanglingEdgeRejected) {
  EXPECT_EQ(CodeOf([&] { g.AddEdge({"pod-a", "ghost", EdgeType::kRunsOn, 1.0}); }),
            ErrorCode::kDanglingEndpoint);
}

TEST_F(GraphStoreTest, RemoveNodeDropsIncidentEdges) {
  EXPECT_EQ(g.RemoveNode("pod-a"), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.RemoveNode("pod-a"), 0u);
  EXPECT_FALSE(g.Contains("pod-a"));
}

TEST_F(GraphStoreTest, UndeclaredMetricRejected) {
  EXPECT_EQ(CodeOf([&] { g.SetMetric("node-0", "cpu_usage", 1.0, 2.0); }),
            ErrorCode::kUndeclaredMetric);
  g.SetMetric("node-0", "cpu_util", 1.5, 2.0);
  EXPECT_DOUBLE_EQ(g.GetNode("node-0").metrics.at("cpu_util"), 1.5);
}

TEST_F(GraphStoreTest, ScoreRangeAndMissingIds) {
  EXPECT_EQ(CodeOf([&] { g.SetAnomalyScore("pod-a", 1.5, ScoreSource::kModel, 1.0); }),
            ErrorCode::kOutOfRange);
  EXPECT_EQ(CodeOf([&] { g.SetAnomalyScore("ghost", 0.5, ScoreSource::kModel, 1.0); }),
            ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { g.GetNode("ghost"); }), ErrorCode::kNotFound);
  g.SetAnomalyScore("pod-a", 0.25, ScoreSource::kModel, 3.0);
  const auto n = g.GetNode("pod-a");
  EXPECT_EQ(n.anomaly_score, 0.25);
  EXPECT_EQ(n.score_source, ScoreSource::kModel);
  EXPECT_DOUBLE_EQ(n.last_updated, 3.0);
}

TEST_F(GraphStoreTest, UpsertMergeKeepsScore) {
  g.SetAnomalyScore("pod-a", 0.75, ScoreSource::kModel, 3.0);
  auto update = Node("pod-a", ComponentKind::kPod);
  update.name = "renamed";
  update.metrics["cpu_usage"] = 0.3;
  g.UpsertNode(update);
  const auto n = g.GetNode("pod-a");
  EXPECT_EQ(n.name, "renamed");
  EXPECT_EQ(n.anomaly_score, 0.75);
  EXPECT_DOUBLE_EQ(n.metrics.at("cpu_usage"), 0.3);
  EXPECT_EQ(CodeOf([&] { g.UpsertNode(Node("pod-a", ComponentKind::kNode)); }),
            ErrorCode::kInvalidArgument);
}

TEST_F(GraphStoreTest, WriteClearsScores) {
  g.SetAnomalyScore("pod-a", 0.75, ScoreSource::kModel, 3.0);
  g.Write([](Transaction& tx) { tx.ClearAnomalyScore("pod-a", 4.0); });
  EXPECT_FALSE(g.GetNode("pod-a").anomaly_score);
}

TEST_F(GraphStoreTest, NodesOfKindSorted) {
  const auto pods = g.NodesOfKind(ComponentKind::kPod);
  ASSERT_EQ(pods.size(), 2u);
  EXPECT_EQ(pods[0].id, "pod-a");
  EXPECT_EQ(pods[1].id, "pod-b");
}

TEST_F(GraphStoreTest, SnapshotIsStableWithoutMutation) {
  EXPECT_EQ(g.Snapshot(), g.Snapshot());
  const auto before = g.Snapshot().sequence;
  g.SetMetric("pod-a", "cpu_usage", 0.1, 9.0);
  EXPECT_GT(g.Snapshot().sequence, before);
}

TEST_F(GraphStoreTest, WriteBatchIsAtomicForReaders) {
  // A reader must never see the two pods with different scores.
  std::atomic<bool> stop{false};
  std::atomic<int> torn{0};
  std::thread reader([&] {
    while (!stop) {
      const auto snap = g.Snapshot();
      std::optional<double> a, b;
      for (const auto& n : snap.nodes) {
        if (n.id == "pod-a") a = n.anomaly_score;
        if (n.id == "pod-b") b = n.anomaly_score;
      }
      if (a != b) ++torn;
    }
  });
  for (int i = 0; i < 2000; ++i) {
    const double s = (i % 100) / 100.0;
    g.Write([&](Transaction& tx) {
      tx.SetAnomalyScore("pod-a", s, ScoreSource::kModel, i);
      tx.SetAnomalyScore("pod-b", s, ScoreSource::kModel, i);
    });
  }
  stop = true;
  reader.join();
  EXPECT_EQ(torn.load(), 0);
}

TEST(SnapshotTest, InconsistentSnapshotRejected) {
  GraphSnapshot snap;
  snap.nodes.push_back(Node("a", ComponentKind::kPod));
  snap.edges.push_back({"a", "b", EdgeType::kRunsOn, 0.0});
  GraphStore g;
  std::string reason;
  EXPECT_FALSE(IsConsistent(snap, &reason));
  EXPECT_NE(reason.find("dangling"), std::string::npos);
  EXPECT_EQ(CodeOf([&] { g.LoadSnapshot(snap); }), ErrorCode::kInconsistentSnapshot);
}

TEST(SnapshotTest, JsonDocumentShape) {
  GraphStore g;
  g.UpsertNode(Node("n", ComponentKind::kNode));
  const auto doc = SnapshotToJson(g.Snapshot(5.0));
  EXPECT_EQ(doc["taken_at"], 5.0);
  EXPECT_EQ(doc["nodes"][0]["kind"], "Node");
  EXPECT_TRUE(doc["nodes"][0]["anomaly_score"].is_null());
  EXPECT_TRUE(doc["edges"].is_array());
}

TEST(SnapshotTest, MalformedJsonRejected) {
  EXPECT_THROW(SnapshotFromJson(nlohmann::json::parse(R"({"nodes": 3})")), Error);
  EXPECT_EQ(CodeOf([] {
              SnapshotFromJson(nlohmann::json::parse(
                  R"({"taken_at":0,"sequence":1,"nodes":[{"id":"x","kind":"Widget","name":"x","metrics":{},"anomaly_score":null,"score_source":"none"}],"edges":[]})"));
            }),
            ErrorCode::kUnknownKind);
}

// Random graph built through the public mutators.
void BuildRandomGraph(GraphStore& g, std::mt19937_64& rng) {
  const auto schema = DefaultMetricSchema();
  std::uniform_int_distribution<int> count(1, 25);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    const auto kind = kAllKinds[rng() % kAllKinds.size()];
    auto node = Node("id-" + std::to_string(i), kind);
    node.last_updated = std::floor(unit(rng) * 100);
    if (auto it = schema.find(kind); it != schema.end()) {
      for (const auto& m : it->second) {
        if (unit(rng) < 0.7) node.metrics[m] = unit(rng) * 1e6;
      }
    }
    g.UpsertNode(node);
    if (unit(rng) < 0.6) {
      g.SetAnomalyScore(node.id, unit(rng),
                        unit(rng) < 0.5 ? ScoreSource::kModel : ScoreSource::kAggregate,
                        node.last_updated);
    }
    ids.push_back(node.id);
  }
  const int m = count(rng) * 2;
  for (int i = 0; i < m; ++i) {
    g.AddEdge({ids[rng() % ids.size()], ids[rng() % ids.size()],
               kAllEdgeTypes[rng() % kAllEdgeTypes.size()], 0.0});
  }
}

TEST(SnapshotPropertyTest, JsonRoundTripPreservesGraph) {
  for (int trial = 0; trial < 200; ++trial) {
    std::mt19937_64 rng(trial);
    GraphStore g;
    BuildRandomGraph(g, rng);
    const auto original = g.Snapshot();
    const auto text = SnapshotToJson(original).dump();
    const auto parsed = SnapshotFromJson(nlohmann::json::parse(text));

    GraphStore loaded;
    loaded.LoadSnapshot(parsed);
    const auto again = loaded.Snapshot(original.taken_at);

    ASSERT_EQ(parsed.sequence, original.sequence) << "trial " << trial;
    ASSERT_EQ(again.nodes.size(), original.nodes.size()) << "trial " << trial;
    for (std::size_t i = 0; i < original.nodes.size(); ++i) {
      const auto& a = original.nodes[i];
      const auto& b = again.nodes[i];
      ASSERT_EQ(a.id, b.id);
      ASSERT_EQ(a.kind, b.kind);
      ASSERT_EQ(a.name, b.name);
      ASSERT_EQ(a.metrics, b.metrics);
      ASSERT_EQ(a.anomaly_score, b.anomaly_score);
      ASSERT_EQ(a.score_source, b.score_source);
    }
    ASSERT_EQ(again.edges.size(), original.edges.size());
    for (std::size_t i = 0; i < original.edges.size(); ++i) {
      ASSERT_EQ(again.edges[i].src, original.edges[i].src);
      ASSERT_EQ(again.edges[i].dst, original.edges[i].dst);
      ASSERT_EQ(again.edges[i].edge_type, original.edges[i].edge_type);
    }
    ASSERT_TRUE(IsConsistent(again));
  }
}

}  // namespace
}  // namespace sentinel::graph
