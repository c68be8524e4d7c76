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


#include "sentinel/pipeline/features.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sentinel::pipeline {

GraphView::GraphView(const graph::GraphSnapshot& snapshot) : snapshot_(snapshot) {
  for (std::size_t i = 0; i < snapshot.nodes.size(); ++i) index_[snapshot.nodes[i].id] = i;
  for (const auto& e : snapshot.edges) {
    out_[e.src].emplace_back(e.edge_type, e.dst);
    in_[e.dst].emplace_back(e.edge_type, e.src);
  }
}

const graph::GraphNode* GraphView::Find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &snapshot_.nodes[it->second];
}

std::vector<const graph::GraphNode*> GraphView::NodesOfKind(ComponentKind kind) const {
  std::vector<const graph::GraphNode*> out;
  for (const auto& n : snapshot_.nodes) {
    if (n.kind == kind) out.push_back(&n);
  }
  return out;
}

std::vector<const graph::GraphNode*> GraphView::Neighbors(const std::string& id,
                                                          EdgeType type,
                                                          Direction direction) const {
  std::vector<std::string> ids;
  auto collect = [&](const auto& adjacency) {
    auto it = adjacency.find(id);
    if (it == adjacency.end()) return;
    for (const auto& [t, other] : it->second) {
      if (t == type) ids.push_back(other);
    }
  };
  if (direction != Direction::kIn) collect(out_);
  if (direction != Direction::kOut) collect(in_);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<const graph::GraphNode*> out;
  for (const auto& other : ids) {
    if (const auto* n = Find(other)) out.push_back(n);
  }
  return out;
}

std::optional<double> GraphView::Score(const std::string& id) const {
  auto it = overlay_.find(id);
  if (it != overlay_.end()) return it->second;
  const auto* n = Find(id);
  return n ? n->anomaly_score : std::nullopt;
}

void GraphView::OverlayScore(const std::string& id, std::optional<double> score) {
  overlay_[id] = score;
}

double Aggregate(Aggregation aggregation, const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  switch (aggregation) {
    case Aggregation::kMean:
      return std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
    case Aggregation::kMax:
      return *std::max_element(values.begin(), values.end());
    case Aggregation::kSum:
      return std::accumulate(values.begin(), values.end(), 0.0);
  }
  return 0.0;
}

FeatureExtraction ExtractFeatures(const GraphView& view, const KindPolicy& policy) {
  FeatureExtraction out;
  out.kind = policy.kind;
  out.columns = policy.FeatureNames();
  const auto nodes = view.NodesOfKind(policy.kind);
  out.no_nodes = nodes.empty();

  std::vector<double> values;
  for (const auto* node : nodes) {
    std::vector<double> row;
    row.reserve(out.columns.size());
    std::string missing;
    for (const auto& metric : policy.features) {
      auto it = node->metrics.find(metric);
      if (it == node->metrics.end() || !std::isfinite(it->second)) {
        missing = metric;
        break;
      }
      row.push_back(it->second);
    }
    if (!missing.empty()) {
      out.excluded.push_back({node->id, "missing metric " + missing});
      continue;
    }
    for (const auto& f : policy.neighbor_features) {
      std::vector<double> gathered;
      for (const auto* other : view.Neighbors(node->id, f.edge_type, f.direction)) {
        if (f.reads_score()) {
          if (auto s = view.Score(other->id)) gathered.push_back(*s);
          continue;
        }
        auto it = other->metrics.find(f.metric);
        if (it != other->metrics.end() && std::isfinite(it->second)) {
          gathered.push_back(it->second);
        }
      }
      if (gathered.empty()) out.zero_filled.push_back({node->id, f.name()});
      row.push_back(Aggregate(f.aggregation, gathered));
    }
    values.insert(values.end(), row.begin(), row.end());
    out.ids.push_back(node->id);
  }
  if (!out.ids.empty()) {
    out.x = models::FeatureMatrix(out.ids.size(), out.columns.size(), std::move(values),
                                  out.columns);
  }
  return out;
}

}  // namespace sentinel::pipeline
