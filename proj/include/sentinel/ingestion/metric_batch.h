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


#ifndef SENTINEL_INGESTION_METRIC_BATCH_H_
#define SENTINEL_INGESTION_METRIC_BATCH_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "sentinel/core/types.h"
#include "sentinel/graph/graph_store.h"

namespace sentinel::ingestion {

struct MetricUpdate {
  std::string id;
  std::string metric;
  double value = 0.0;

  bool operator==(const MetricUpdate&) const = default;
};

// Metric values observed at one instant.
struct MetricBatch {
  Timestamp ts = 0.0;
  std::vector<MetricUpdate> updates;

  bool operator==(const MetricBatch&) const = default;
};

nlohmann::json BatchToJson(const MetricBatch& batch);
// Throws kParseError.
MetricBatch BatchFromJson(const nlohmann::json& doc);

struct ApplyReport {
  std::size_t applied = 0;
  std::vector<std::string> unknown_ids;  // updates naming nodes not in the graph
  std::vector<std::string> rejected;     // "id:metric" not declared for the kind
};

// Writes the batch in one transaction. Updates for unknown nodes or
// undeclared metrics are skipped and reported.
ApplyReport ApplyMetricBatch(graph::GraphStore& store, const MetricBatch& batch);

}  // namespace sentinel::ingestion

#endif  // SENTINEL_INGESTION_METRIC_BATCH_H_
