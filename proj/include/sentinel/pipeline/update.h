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


// The two scheduled pipeline functions: scoring the graph with the
// published bundles, and retraining the bundles from the observation history.

#ifndef SENTINEL_PIPELINE_UPDATE_H_
#define SENTINEL_PIPELINE_UPDATE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentinel/graph/graph_store.h"
#include "sentinel/pipeline/bundle.h"
#include "sentinel/pipeline/config.h"
#include "sentinel/pipeline/features.h"
#include "sentinel/pipeline/observation_store.h"

namespace sentinel::pipeline {

struct KindScoreReport {
  ComponentKind kind = ComponentKind::kPod;
  PolicyMode mode = PolicyMode::kModeled;
  int bundle_version = 0;  // 0 when unscored or an aggregator
  std::map<std::string, double> scores;
  std::vector<std::string> cleared;  // aggregators with no scored neighbour
  std::vector<ExtractionIssue> excluded;
  std::vector<ExtractionIssue> zero_filled;
  bool no_nodes = false;
  std::optional<ErrorCode> error;  // e.g. kMissingBundle
  std::string error_detail;
};

struct TickReport {
  Timestamp at = 0.0;
  std::vector<ComponentKind> order;
  std::vector<KindScoreReport> kinds;  // in evaluation order

  const KindScoreReport* Find(ComponentKind kind) const;
  // Every score written in the tick, by node id.
  std::map<std::string, double> AllScores() const;
  nlohmann::json ToJson() const;
};

// Order from the override when present, else the derived one.
std::vector<ComponentKind> ResolveOrder(const PipelineConfig& config);

// Scores every enabled kind in evaluation order and writes all scores in one
// graph transaction. Modeled kinds also append their rows to `observations`
// (even without a bundle, so the first training has data). Per-kind
// problems are reported, never thrown.
TickReport UpdateGraph(graph::GraphStore& graph, const BundleRegistry& bundles,
                       ObservationStore& observations, const PipelineConfig& config,
                       Timestamp now, bool record_observations = true);
// Same, but over an existing snapshot and without writing anything.
TickReport ScoreSnapshot(const graph::GraphSnapshot& snapshot, const BundleRegistry& bundles,
                         ObservationStore* observations, const PipelineConfig& config,
                         Timestamp now);

enum class TrainingStatus { kTrained, kInsufficientData, kFailed };

std::string_view TrainingStatusName(TrainingStatus status);

struct KindTrainingReport {
  ComponentKind kind = ComponentKind::kPod;
  TrainingStatus status = TrainingStatus::kTrained;
  std::size_t rows = 0;
  std::size_t needed = 0;
  int version = 0;  // published version, or the previous one on failure
  std::size_t labeled_anomalies = 0;
  std::size_t synthetic_outliers = 0;
  double fit_time_s = 0.0;
  std::optional<ErrorCode> error;
  std::string error_detail;
};

struct ModelUpdateReport {
  Timestamp at = 0.0;
  std::vector<KindTrainingReport> kinds;

  const KindTrainingReport* Find(ComponentKind kind) const;
  bool all_trained() const;
  nlohmann::json ToJson() const;
};

// Fits one bundle from a training matrix: standardize, label with the
// configured unsupervised model, inject synthetic outliers when nothing was
// flagged, then fit the supervised classifier. Model seeds are the
// configured ones mixed with the pipeline seed and the kind.
ModelBundle TrainBundle(const KindPolicy& policy, const models::FeatureMatrix& x,
                        const PipelineConfig& config, Timestamp now);

// Retrains every modeled kind independently; a failure leaves that kind's
// previous bundle live.
ModelUpdateReport UpdateModels(const ObservationStore& observations, BundleRegistry& bundles,
                               const PipelineConfig& config, Timestamp now);

}  // namespace sentinel::pipeline

#endif  // SENTINEL_PIPELINE_UPDATE_H_
