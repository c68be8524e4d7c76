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


// Per-kind feature extraction from a graph snapshot.

#ifndef SENTINEL_PIPELINE_FEATURES_H_
#define SENTINEL_PIPELINE_FEATURES_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/graph/graph_store.h"
#include "sentinel/models/feature_matrix.h"
#include "sentinel/pipeline/config.h"

namespace sentinel::pipeline {

// Read-only indexed view over a snapshot, with an overlay of scores written
// earlier in the same tick. An overlay entry of nullopt means "cleared".
class GraphView {
 public:
  explicit GraphView(const graph::GraphSnapshot& snapshot);

  const graph::GraphNode* Find(const std::string& id) const;
  // Sorted by id.
  std::vector<const graph::GraphNode*> NodesOfKind(ComponentKind kind) const;
  // Deduplicated, sorted by id.
  std::vector<const graph::GraphNode*> Neighbors(const std::string& id, EdgeType type,
                                                 Direction direction) const;

  std::optional<double> Score(const std::string& id) const;
  void OverlayScore(const std::string& id, std::optional<double> score);
  const std::map<std::string, std::optional<double>>& overlay() const { return overlay_; }

  const graph::GraphSnapshot& snapshot() const { return snapshot_; }

 private:
  const graph::GraphSnapshot& snapshot_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::vector<std::pair<EdgeType, std::string>>> out_;
  std::map<std::string, std::vector<std::pair<EdgeType, std::string>>> in_;
  std::map<std::string, std::optional<double>> overlay_;
};

struct ExtractionIssue {
  std::string node_id;
  std::string detail;
};

struct FeatureExtraction {
  ComponentKind kind = ComponentKind::kPod;
  std::vector<std::string> columns;
  // Empty when no row survived.
  models::FeatureMatrix x;
  std::vector<std::string> ids;  // row i -> node id
  // Nodes dropped for a missing own metric.
  std::vector<ExtractionIssue> excluded;
  // Neighbour features that had no contributing neighbour and were set to 0.
  std::vector<ExtractionIssue> zero_filled;
  // No node of the kind exists (the NoNodes case; not fatal).
  bool no_nodes = false;
};

// Columns are the policy's own metrics, then its neighbour features in
// declared order. A neighbour missing the metric (or score) is skipped.
FeatureExtraction ExtractFeatures(const GraphView& view, const KindPolicy& policy);

double Aggregate(Aggregation aggregation, const std::vector<double>& values);

}  // namespace sentinel::pipeline

#endif  // SENTINEL_PIPELINE_FEATURES_H_
