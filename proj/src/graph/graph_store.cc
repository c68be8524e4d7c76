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

#include "sentinel/graph/graph_store.h"

#include <algorithm>
#include <mutex>

#include "sentinel/core/error.h"

namespace sentinel::graph {

MetricSchema DefaultMetricSchema() {
  const std::set<std::string> workload = {"cpu_usage", "mem_usage", "net_rx",
                                          "net_tx"};
  return {
      {ComponentKind::kContainer, workload},
      {ComponentKind::kPod, workload},
      {ComponentKind::kNode, {"cpu_util", "mem_util", "pod_count"}},
  };
}

// ---------------------------------------------------------------------------
// Transaction

std::string Transaction::UpsertNode(const GraphNode& node) {
  return store_.UpsertNodeLocked(node);
}
std::size_t Transaction::RemoveNode(const std::string& id) {
  return store_.RemoveNodeLocked(id);
}
void Transaction::AddEdge(const GraphEdge& edge) { store_.AddEdgeLocked(edge); }
void Transaction::RemoveEdge(const std::string& src, const std::string& dst,
                             EdgeType type) {
  store_.RemoveEdgeLocked(src, dst, type);
}
void Transaction::SetAnomalyScore(const std::string& id, double score,
                                  ScoreSource source, Timestamp at) {
  store_.SetAnomalyScoreLocked(id, score, source, at);
}
void Transaction::ClearAnomalyScore(const std::string& id, Timestamp at) {
  store_.ClearAnomalyScoreLocked(id, at);
}
void Transaction::SetMetric(const std::string& id, const std::string& metric,
                            double value, Timestamp at) {
  store_.SetMetricLocked(id, metric, value, at);
}

// ---------------------------------------------------------------------------
// GraphStore

GraphStore::GraphStore(MetricSchema schema) : schema_(std::move(schema)) {}

void GraphStore::set_schema(MetricSchema schema) {
  std::unique_lock lock(mutex_);
  schema_ = std::move(schema);
}

void GraphStore::CheckMetric(ComponentKind kind,
                             const std::string& metric) const {
  auto it = schema_.find(kind);
  if (it == schema_.end() || !it->second.contains(metric)) {
    throw Error(ErrorCode::kUndeclaredMetric,
                "metric '" + metric + "' is not declared for kind " +
                    std::string(KindName(kind)));
  }
}

void GraphStore::Touch(Timestamp at) { latest_ = std::max(latest_, at); }

std::string GraphStore::UpsertNodeLocked(const GraphNode& node) {
  if (node.id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "node id must not be empty");
  }
  for (const auto& [metric, value] : node.metrics) {
    CheckMetric(node.kind, metric);
  }
  if (node.anomaly_score &&
      !(*node.anomaly_score >= 0.0 && *node.anomaly_score <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "anomaly score of " + node.id);
  }
  Touch(node.last_updated);
  auto it = nodes_.find(node.id);
  if (it == nodes_.end()) {
    GraphNode stored = node;
    if (!stored.anomaly_score) stored.score_source = ScoreSource::kNone;
    nodes_.emplace(node.id, std::move(stored));
    return node.id;
  }
  GraphNode& existing = it->second;
  if (existing.kind != node.kind) {
    throw Error(ErrorCode::kInvalidArgument,
                "node " + node.id + " already exists with kind " +
                    std::string(KindName(existing.kind)));
  }
  if (!node.name.empty()) existing.name = node.name;
  for (const auto& [metric, value] : node.metrics) {
    existing.metrics[metric] = value;
  }
  if (node.anomaly_score) {
    existing.anomaly_score = node.anomaly_score;
    existing.score_source = node.score_source;
  }
  existing.last_updated = std::max(existing.last_updated, node.last_updated);
  return node.id;
}

std::size_t GraphStore::RemoveNodeLocked(const std::string& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return 0;
  std::size_t removed = 0;
  if (auto out = out_.find(id); out != out_.end()) {
    for (const auto& [type, dst] : out->second) {
      edges_.erase({id, dst, type});
      in_[dst].erase({type, id});
      ++removed;
    }
    out_.erase(out);
  }
  if (auto in = in_.find(id); in != in_.end()) {
    for (const auto& [type, src] : in->second) {
      // Self loops were already counted on the outgoing side.
      if (src == id) continue;
      if (edges_.erase({src, id, type}) > 0) ++removed;
      out_[src].erase({type, id});
    }
    in_.erase(in);
  }
  nodes_.erase(it);
  return removed;
}

void GraphStore::AddEdgeLocked(const GraphEdge& edge) {
  if (!nodes_.contains(edge.src) || !nodes_.contains(edge.dst)) {
    throw Error(ErrorCode::kDanglingEndpoint,
                edge.src + " -" + std::string(EdgeTypeName(edge.edge_type)) +
                    "-> " + edge.dst);
  }
  Touch(edge.created_at);
  auto [pos, inserted] =
      edges_.emplace(EdgeKey{edge.src, edge.dst, edge.edge_type},
                     edge.created_at);
  if (!inserted) return;
  out_[edge.src].insert({edge.edge_type, edge.dst});
  in_[edge.dst].insert({edge.edge_type, edge.src});
}

void GraphStore::RemoveEdgeLocked(const std::string& src,
                                  const std::string& dst, EdgeType type) {
  if (edges_.erase({src, dst, type}) == 0) return;
  out_[src].erase({type, dst});
  in_[dst].erase({type, src});
}

void GraphStore::SetAnomalyScoreLocked(const std::string& id, double score,
                                       ScoreSource source, Timestamp at) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange,
                "score " + std::to_string(score) + " for " + id);
  }
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::kNotFound, id);
  it->second.anomaly_score = score;
  it->second.score_source = source;
  it->second.last_updated = at;
  Touch(at);
}

void GraphStore::ClearAnomalyScoreLocked(const std::string& id, Timestamp at) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::kNotFound, id);
  it->second.anomaly_score.reset();
  it->second.score_source = ScoreSource::kNone;
  it->second.last_updated = at;
  Touch(at);
}

void GraphStore::SetMetricLocked(const std::string& id,
                                 const std::string& metric, double value,
                                 Timestamp at) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::kNotFound, id);
  CheckMetric(it->second.kind, metric);
  it->second.metrics[metric] = value;
  it->second.last_updated = std::max(it->second.last_updated, at);
  Touch(at);
}

std::string GraphStore::UpsertNode(const GraphNode& node) {
  std::unique_lock lock(mutex_);
  ++sequence_;
  return UpsertNodeLocked(node);
}

std::size_t GraphStore::RemoveNode(const std::string& id) {
  std::unique_lock lock(mutex_);
  ++sequence_;
  return RemoveNodeLocked(id);
}

void GraphStore::AddEdge(const GraphEdge& edge) {
  std::unique_lock lock(mutex_);
  ++sequence_;
  AddEdgeLocked(edge);
}

void GraphStore::RemoveEdge(const std::string& src, const std::string& dst,
                            EdgeType type) {
  std::unique_lock lock(mutex_);
  ++sequence_;
  RemoveEdgeLocked(src, dst, type);
}

void GraphStore::SetAnomalyScore(const std::string& id, double score,
                                 ScoreSource source, Timestamp at) {
  std::unique_lock lock(mutex_);
  ++sequence_;
  SetAnomalyScoreLocked(id, score, source, at);
}

void GraphStore::SetMetric(const std::string& id, const std::string& metric,
                           double value, Timestamp at) {
  std::unique_lock lock(mutex_);
  ++sequence_;
  SetMetricLocked(id, metric, value, at);
}

void GraphStore::Write(const std::function<void(Transaction&)>& batch) {
  std::unique_lock lock(mutex_);
  ++sequence_;
  Transaction tx(*this);
  batch(tx);
}

GraphNode GraphStore::GetNode(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::kNotFound, id);
  return it->second;
}

std::optional<GraphNode> GraphStore::FindNode(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return std::nullopt;
  return it->second;
}

bool GraphStore::Contains(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return nodes_.contains(id);
}

std::vector<std::string> GraphStore::NeighborIdsLocked(
    const std::string& id, EdgeType type, Direction direction) const {
  if (!nodes_.contains(id)) throw Error(ErrorCode::kNotFound, id);
  std::set<std::string> result;
  auto collect = [&](const Adjacency& adjacency) {
    auto it = adjacency.find(id);
    if (it == adjacency.end()) return;
    auto first = it->second.lower_bound({type, std::string()});
    for (auto e = first; e != it->second.end() && e->first == type; ++e) {
      result.insert(e->second);
    }
  };
  if (direction != Direction::kIn) collect(out_);
  if (direction != Direction::kOut) collect(in_);
  return {result.begin(), result.end()};
}

std::vector<std::string> GraphStore::NeighborIds(const std::string& id,
                                                 EdgeType type,
                                                 Direction direction) const {
  std::shared_lock lock(mutex_);
  return NeighborIdsLocked(id, type, direction);
}

std::vector<GraphNode> GraphStore::Neighbors(const std::string& id,
                                             EdgeType type,
                                             Direction direction) const {
  std::shared_lock lock(mutex_);
  std::vector<GraphNode> result;
  for (const auto& other : NeighborIdsLocked(id, type, direction)) {
    result.push_back(nodes_.at(other));
  }
  return result;
}

std::vector<GraphNode> GraphStore::NodesOfKind(ComponentKind kind) const {
  std::shared_lock lock(mutex_);
  std::vector<GraphNode> result;
  for (const auto& [id, node] : nodes_) {
    if (node.kind == kind) result.push_back(node);
  }
  return result;
}

bool GraphStore::HasEdge(const std::string& src, const std::string& dst,
                         EdgeType type) const {
  std::shared_lock lock(mutex_);
  return edges_.contains({src, dst, type});
}

std::size_t GraphStore::node_count() const {
  std::shared_lock lock(mutex_);
  return nodes_.size();
}

std::size_t GraphStore::edge_count() const {
  std::shared_lock lock(mutex_);
  return edges_.size();
}

GraphSnapshot GraphStore::Snapshot(std::optional<Timestamp> taken_at) const {
  std::shared_lock lock(mutex_);
  GraphSnapshot snapshot;
  snapshot.nodes.reserve(nodes_.size());
  for (const auto& [id, node] : nodes_) snapshot.nodes.push_back(node);
  snapshot.edges.reserve(edges_.size());
  for (const auto& [key, created_at] : edges_) {
    snapshot.edges.push_back({std::get<0>(key), std::get<1>(key),
                              std::get<2>(key), created_at});
  }
  snapshot.taken_at = taken_at.value_or(latest_);
  snapshot.sequence = sequence_;
  return snapshot;
}

bool IsConsistent(const GraphSnapshot& snapshot, std::string* reason) {
  auto fail = [&](const std::string& why) {
    if (reason != nullptr) *reason = why;
    return false;
  };
  std::set<std::string> ids;
  for (const auto& node : snapshot.nodes) {
    if (!ids.insert(node.id).second) return fail("duplicate node " + node.id);
    if (node.anomaly_score &&
        !(*node.anomaly_score >= 0.0 && *node.anomaly_score <= 1.0)) {
      return fail("score out of range on " + node.id);
    }
  }
  std::set<std::tuple<std::string, std::string, EdgeType>> seen;
  for (const auto& edge : snapshot.edges) {
    if (!ids.contains(edge.src) || !ids.contains(edge.dst)) {
      return fail("dangling edge " + edge.src + " -> " + edge.dst);
    }
    if (!seen.insert({edge.src, edge.dst, edge.edge_type}).second) {
      return fail("duplicate edge " + edge.src + " -> " + edge.dst);
    }
  }
  return true;
}

void GraphStore::LoadSnapshot(const GraphSnapshot& snapshot) {
  std::string reason;
  if (!IsConsistent(snapshot, &reason)) {
    throw Error(ErrorCode::kInconsistentSnapshot, reason);
  }
  std::unique_lock lock(mutex_);
  for (const auto& node : snapshot.nodes) {
    for (const auto& [metric, value] : node.metrics) {
      CheckMetric(node.kind, metric);
    }
  }
  nodes_.clear();
  edges_.clear();
  out_.clear();
  in_.clear();
  latest_ = snapshot.taken_at;
  for (const auto& node : snapshot.nodes) {
    nodes_.emplace(node.id, node);
    Touch(node.last_updated);
  }
  for (const auto& edge : snapshot.edges) {
    edges_.emplace(EdgeKey{edge.src, edge.dst, edge.edge_type},
                   edge.created_at);
    out_[edge.src].insert({edge.edge_type, edge.dst});
    in_[edge.dst].insert({edge.edge_type, edge.src});
  }
  sequence_ = std::max(sequence_ + 1, snapshot.sequence);
}

}  // namespace sentinel::graph
