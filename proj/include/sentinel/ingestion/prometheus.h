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


// Read client for the Prometheus instant-query API.

#ifndef SENTINEL_INGESTION_PROMETHEUS_H_
#define SENTINEL_INGESTION_PROMETHEUS_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sentinel/core/error.h"
#include "sentinel/core/types.h"
#include "sentinel/ingestion/metric_batch.h"

namespace sentinel::ingestion {

// `promql` may contain `{id}`, which is replaced by `target_label` before the
// query is sent (e.g. "sum by ({id}) (rate(container_cpu_usage_seconds_total[1m]))").
// Each result series is keyed by the value of its `target_label` label.
struct MetricQuerySpec {
  ComponentKind kind = ComponentKind::kPod;
  std::string metric_name;
  std::string promql;
  std::string unit;
  std::string target_label = "pod";

  // Throws kInvalidConfig on an empty promql or metric name.
  void Validate() const;
};

// Rejects duplicate (kind, metric_name) pairs.
void ValidateQuerySpecs(const std::vector<MetricQuerySpec>& specs);

nlohmann::json QuerySpecToJson(const MetricQuerySpec& spec);
MetricQuerySpec QuerySpecFromJson(const nlohmann::json& doc);  // kInvalidConfig

struct SpecError {
  std::size_t spec_index = 0;
  ErrorCode code = ErrorCode::kHttpError;
  std::string detail;
};

struct ScrapeResult {
  // (node id, metric name) -> value; only series the endpoint returned.
  std::map<std::pair<std::string, std::string>, double> values;
  std::vector<SpecError> errors;

  // Some specs failed while others succeeded (the PartialResult case).
  bool partial() const { return !errors.empty(); }
  MetricBatch ToBatch(Timestamp ts) const;
};

// One sample of an instant-vector result.
struct Sample {
  std::map<std::string, std::string> labels;
  double value = 0.0;
};

// Parses a `/api/v1/query` response body. Non-finite sample values are
// dropped. Throws kMalformedResponse.
std::vector<Sample> ParseInstantVector(const std::string& body);

// Stateless apart from connection settings; callable from any thread.
class PrometheusClient {
 public:
  // base_url like "http://prometheus:9090".
  explicit PrometheusClient(std::string base_url, double timeout_s = 5.0);

  // Throws kHttpError or kMalformedResponse.
  std::vector<Sample> Query(const std::string& promql, Timestamp at) const;

  // One instant query per spec. Failing specs are collected in `errors`;
  // when every spec fails the first error is thrown instead.
  ScrapeResult Scrape(const std::vector<MetricQuerySpec>& specs, Timestamp at) const;

 private:
  std::string base_url_;
  double timeout_s_;
};

}  // namespace sentinel::ingestion

#endif  // SENTINEL_INGESTION_PROMETHEUS_H_
