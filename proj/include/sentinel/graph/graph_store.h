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

// In-process heterogeneous property graph of the cluster.
//
// Nodes are keyed by an opaque string id and carry one ComponentKind, a
// metric map and an optional anomaly score. Edges are typed and unique per
// (src, dst, type). All list-returning queries are sorted by id so pipeline
// runs are reproducible.
//
// Concurrency: many readers or one writer. Write() runs a whole batch of
// mutations under a single exclusive lock, which is how a pipeline tick is
// made atomic for readers.

#ifndef SENTINEL_GRAPH_GRAPH_STORE_H_
#define SENTINEL_GRAPH_GRAPH_STORE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "sentinel/core/types.h"

namespace sentinel::graph {

struct GraphNode {
  std::string id;
  ComponentKind kind = ComponentKind::kPod;
  std::string name;
  std::map<std::string, double> metrics;
  std::optional<double> anomaly_score;
  ScoreSource score_source = ScoreSource::kNone;
  Timestamp last_updated = 0.0;

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::string src;
  std::string dst;
  EdgeType edge_type = EdgeType::kRunsOn;
  Timestamp created_at = 0.0;

  bool operator==(const GraphEdge&) const = default;
};

struct GraphSnapshot {
  std::vector<GraphNode> nodes;  // sorted by id
  std::vector<GraphEdge> edges;  // sorted by (src, dst, edge_type)
  Timestamp taken_at = 0.0;
  std::uint64_t sequence = 0;

  bool operator==(const GraphSnapshot&) const = default;
};

// Metric names each kind may carry. Kinds absent from the map carry none.
using MetricSchema = std::map<ComponentKind, std::set<std::string>>;

// The default metric vocabulary of the simulator and the default policies.
MetricSchema DefaultMetricSchema();

class GraphStore;

// Mutation handle valid only inside GraphStore::Write(). All operations have
// the same semantics as the GraphStore methods of the same name.
class Transaction {
 public:
  std::string UpsertNode(const GraphNode& node);
  std::size_t RemoveNode(const std::string& id);
  void AddEdge(const GraphEdge& edge);
  void RemoveEdge(const std::string& src, const std::string& dst,
                  EdgeType type);
  void SetAnomalyScore(const std::string& id, double score, ScoreSource source,
                       Timestamp at);
  void ClearAnomalyScore(const std::string& id, Timestamp at);
  void SetMetric(const std::string& id, const std::string& metric,
                 double value, Timestamp at);

 private:
  friend class GraphStore;
  explicit Transaction(GraphStore& store) : store_(store) {}
  GraphStore& store_;
};

class GraphStore {
 public:
  explicit GraphStore(MetricSchema schema = DefaultMetricSchema());

  GraphStore(const GraphStore&) = delete;
  GraphStore& operator=(const GraphStore&) = delete;

  // Inserts or merges. Merging overwrites name and the given metric keys and
  // keeps the stored anomaly score unless `node.anomaly_score` is set.
  // Throws kUndeclaredMetric naming the metric, kInvalidArgument on a kind
  // change of an existing id.
  std::string UpsertNode(const GraphNode& node);

  // Returns the number of incident edges removed; absent ids return 0.
  std::size_t RemoveNode(const std::string& id);

  // Duplicate adds are no-ops. Throws kDanglingEndpoint.
  void AddEdge(const GraphEdge& edge);
  void RemoveEdge(const std::string& src, const std::string& dst,
                  EdgeType type);

  // Throws kOutOfRange unless 0 <= score <= 1, kNotFound for missing ids.
  void SetAnomalyScore(const std::string& id, double score, ScoreSource source,
                       Timestamp at);
  void SetMetric(const std::string& id, const std::string& metric,
                 double value, Timestamp at);

  // Runs `batch` under one exclusive lock.
  void Write(const std::function<void(Transaction&)>& batch);

  GraphNode GetNode(const std::string& id) const;  // throws kNotFound
  std::optional<GraphNode> FindNode(const std::string& id) const;
  bool Contains(const std::string& id) const;

  // One-hop neighbours over `type`, deduplicated and sorted by id.
  std::vector<GraphNode> Neighbors(const std::string& id, EdgeType type,
                                   Direction direction) const;
  std::vector<std::string> NeighborIds(const std::string& id, EdgeType type,
                                       Direction direction) const;
  std::vector<GraphNode> NodesOfKind(ComponentKind kind) const;
  bool HasEdge(const std::string& src, const std::string& dst,
               EdgeType type) const;

  std::size_t node_count() const;
  std::size_t edge_count() const;

  // Immutable copy. `taken_at` defaults to the latest timestamp seen. The
  // sequence counts mutation calls and Write() batches, so two snapshots of
  // an unchanged graph are equal.
  GraphSnapshot Snapshot(std::optional<Timestamp> taken_at = std::nullopt) const;
  // Replaces the whole graph. Throws kInconsistentSnapshot on dangling or
  // duplicate edges, duplicate node ids or out-of-range scores.
  void LoadSnapshot(const GraphSnapshot& snapshot);

  const MetricSchema& schema() const { return schema_; }
  void set_schema(MetricSchema schema);

 private:
  friend class Transaction;

  using EdgeKey = std::tuple<std::string, std::string, EdgeType>;
  // (edge type, other endpoint)
  using Adjacency = std::map<std::string, std::set<std::pair<EdgeType, std::string>>>;

  std::string UpsertNodeLocked(const GraphNode& node);
  std::size_t RemoveNodeLocked(const std::string& id);
  void AddEdgeLocked(const GraphEdge& edge);
  void RemoveEdgeLocked(const std::string& src, const std::string& dst,
                        EdgeType type);
  void SetAnomalyScoreLocked(const std::string& id, double score,
                             ScoreSource source, Timestamp at);
  void ClearAnomalyScoreLocked(const std::string& id, Timestamp at);
  void SetMetricLocked(const std::string& id, const std::string& metric,
                       double value, Timestamp at);
  std::vector<std::string> NeighborIdsLocked(const std::string& id,
                                             EdgeType type,
                                             Direction direction) const;
  void CheckMetric(ComponentKind kind, const std::string& metric) const;
  void Touch(Timestamp at);

  mutable std::shared_mutex mutex_;
  MetricSchema schema_;
  std::map<std::string, GraphNode> nodes_;
  std::map<EdgeKey, Timestamp> edges_;
  Adjacency out_;
  Adjacency in_;
  Timestamp latest_ = 0.0;
  std::uint64_t sequence_ = 0;
};

// Checks referential integrity; used by tests and LoadSnapshot.
bool IsConsistent(const GraphSnapshot& snapshot, std::string* reason = nullptr);

}  // namespace sentinel::graph

#endif  // SENTINEL_GRAPH_GRAPH_STORE_H_
