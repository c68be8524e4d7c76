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


// Pipeline configuration: scheduling, retention, outlier injection and the
// per-kind policies that decide how each component kind gets its score.

#ifndef SENTINEL_PIPELINE_CONFIG_H_
#define SENTINEL_PIPELINE_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentinel/core/error.h"
#include "sentinel/core/types.h"
#include "sentinel/graph/graph_store.h"
#include "sentinel/ingestion/prometheus.h"
#include "sentinel/ingestion/simulator.h"
#include "sentinel/models/classifier.h"

namespace sentinel::pipeline {

enum class Aggregation { kMean, kMax, kSum };

std::string_view AggregationName(Aggregation a);
Aggregation ParseAggregation(std::string_view name);  // kInvalidArgument

// Neighbour metric name that reads the neighbour's anomaly score instead of
// a metric.
inline constexpr std::string_view kScoreMetric = "score";

struct NeighborFeature {
  EdgeType edge_type = EdgeType::kRunsOn;
  Direction direction = Direction::kOut;
  std::string metric;
  Aggregation aggregation = Aggregation::kMean;

  bool reads_score() const { return metric == kScoreMetric; }
  // Column name, e.g. "RUNS_ON.out.cpu_util.mean".
  std::string name() const;
  bool operator==(const NeighborFeature&) const = default;
};

struct AggregateEdge {
  EdgeType edge_type = EdgeType::kManages;
  Direction direction = Direction::kOut;
  bool operator==(const AggregateEdge&) const = default;
};

enum class PolicyMode { kModeled, kAggregator, kDisabled };

std::string_view PolicyModeName(PolicyMode mode);

struct KindPolicy {
  ComponentKind kind = ComponentKind::kPod;
  PolicyMode mode = PolicyMode::kModeled;
  // modeled
  std::vector<std::string> features;  // own metrics, in column order
  std::vector<NeighborFeature> neighbor_features;
  models::UnsupervisedConfig unsupervised;
  models::SupervisedConfig supervised;
  // aggregator (always the mean)
  std::vector<AggregateEdge> aggregate_edges;

  std::vector<std::string> FeatureNames() const;
};

struct OutlierInjectionConfig {
  double fraction = 0.02;
  double sigma_shift = 3.0;
  int min_count = 3;
};

// Sources for live mode.
struct LiveConfig {
  std::string prometheus_url;
  std::string topology_file;  // snapshot JSON with the cluster topology
  double scrape_timeout_s = 5.0;
  std::vector<ingestion::MetricQuerySpec> queries;
};

struct PipelineConfig {
  double update_graph_interval_s = 1.0;
  double update_models_interval_s = 60.0;
  std::size_t max_observations = 10000;
  std::size_t min_training_rows = 30;
  std::uint64_t seed = 0;
  OutlierInjectionConfig outliers;
  std::map<ComponentKind, KindPolicy> kinds;
  std::optional<std::vector<ComponentKind>> evaluation_order;
  ingestion::SimTopologySpec simulator;
  LiveConfig live;

  // The policies every run starts from; config files override per kind.
  static PipelineConfig Default();

  const KindPolicy* Policy(ComponentKind kind) const;
  // Default schema extended with every metric a policy declares.
  graph::MetricSchema Schema() const;
};

KindPolicy DefaultPolicy(ComponentKind kind);

struct FieldError {
  std::string field;
  std::string message;
};

// kInvalidConfig carrying every field-level problem found.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<FieldError> fields);
  const std::vector<FieldError>& fields() const { return fields_; }

 private:
  std::vector<FieldError> fields_;
};

// Range and consistency checks, including acyclicity of the policies.
std::vector<FieldError> ValidateConfig(const PipelineConfig& config);

nlohmann::json ConfigToJson(const PipelineConfig& config);
// Starts from Default() and overlays the document. Throws ConfigError
// listing every field-level problem, including those from ValidateConfig.
PipelineConfig ConfigFromJson(const nlohmann::json& doc);
// TOML file -> ConfigFromJson. Throws kNotFound, ParseError or ConfigError.
PipelineConfig LoadConfigFile(const std::string& path);

}  // namespace sentinel::pipeline

#endif  // SENTINEL_PIPELINE_CONFIG_H_
