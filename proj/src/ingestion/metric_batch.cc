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


#include "sentinel/ingestion/metric_batch.h"

#include "sentinel/core/error.h"

namespace sentinel::ingestion {

nlohmann::json BatchToJson(const MetricBatch& batch) {
  nlohmann::json updates = nlohmann::json::array();
  for (const auto& u : batch.updates) {
    updates.push_back({{"id", u.id}, {"metric", u.metric}, {"value", u.value}});
  }
  return {{"ts", batch.ts}, {"updates", std::move(updates)}};
}

MetricBatch BatchFromJson(const nlohmann::json& doc) {
  try {
    MetricBatch batch;
    if (!doc.is_object()) throw Error(ErrorCode::kParseError, "batch must be an object");
    batch.ts = doc.at("ts").get<double>();
    for (const auto& u : doc.at("updates")) {
      batch.updates.push_back({u.at("id").get<std::string>(), u.at("metric").get<std::string>(),
                               u.at("value").get<double>()});
    }
    return batch;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

ApplyReport ApplyMetricBatch(graph::GraphStore& store, const MetricBatch& batch) {
  ApplyReport report;
  store.Write([&](graph::Transaction& tx) {
    for (const auto& u : batch.updates) {
      try {
        tx.SetMetric(u.id, u.metric, u.value, batch.ts);
        ++report.applied;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kNotFound) {
          report.unknown_ids.push_back(u.id);
        } else if (e.code() == ErrorCode::kUndeclaredMetric) {
          report.rejected.push_back(u.id + ":" + u.metric);
        } else {
          throw;
        }
      }
    }
  });
  return report;
}

}  // namespace sentinel::ingestion
