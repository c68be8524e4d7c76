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


#include "sentinel/ingestion/prometheus.h"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "httplib.h"

namespace sentinel::ingestion {

using nlohmann::json;

void MetricQuerySpec::Validate() const {
  if (metric_name.empty()) throw Error(ErrorCode::kInvalidConfig, "metric_name is empty");
  if (promql.empty()) throw Error(ErrorCode::kInvalidConfig, metric_name + ": promql is empty");
  if (target_label.empty()) {
    throw Error(ErrorCode::kInvalidConfig, metric_name + ": target_label is empty");
  }
}

void ValidateQuerySpecs(const std::vector<MetricQuerySpec>& specs) {
  std::set<std::pair<ComponentKind, std::string>> seen;
  for (const auto& s : specs) {
    s.Validate();
    if (!seen.emplace(s.kind, s.metric_name).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate query for " +
                                                 std::string(KindName(s.kind)) + "." +
                                                 s.metric_name);
    }
  }
}

json QuerySpecToJson(const MetricQuerySpec& s) {
  return {{"kind", KindName(s.kind)}, {"metric_name", s.metric_name}, {"promql", s.promql},
          {"unit", s.unit},           {"target_label", s.target_label}};
}

MetricQuerySpec QuerySpecFromJson(const json& doc) {
  try {
    MetricQuerySpec s;
    s.kind = ParseKind(doc.at("kind").get<std::string>());
    s.metric_name = doc.at("metric_name").get<std::string>();
    s.promql = doc.at("promql").get<std::string>();
    s.unit = doc.value("unit", "");
    s.target_label = doc.value("target_label", "pod");
    s.Validate();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("query spec: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, "query spec: " + e.detail());
  }
}

MetricBatch ScrapeResult::ToBatch(Timestamp ts) const {
  MetricBatch batch;
  batch.ts = ts;
  for (const auto& [key, value] : values) batch.updates.push_back({key.first, key.second, value});
  return batch;
}

std::vector<Sample> ParseInstantVector(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("invalid JSON: ") + e.what());
  }
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kMalformedResponse, why); };
  if (!doc.is_object() || doc.value("status", "") != "success") {
    std::string detail = doc.is_object() ? doc.value("error", "status is not success") : "";
    fail("query failed: " + detail);
  }
  auto data = doc.find("data");
  if (data == doc.end() || !data->is_object()) fail("missing data");
  if (data->value("resultType", "") != "vector") fail("resultType is not vector");
  auto result = data->find("result");
  if (result == data->end() || !result->is_array()) fail("missing result array");

  std::vector<Sample> samples;
  for (const auto& series : *result) {
    if (!series.is_object()) fail("series is not an object");
    auto metric = series.find("metric");
    auto value = series.find("value");
    if (metric == series.end() || !metric->is_object()) fail("series without metric labels");
    if (value == series.end() || !value->is_array() || value->size() != 2 ||
        !(*value)[1].is_string()) {
      fail("series value is not [ts, \"v\"]");
    }
    Sample s;
    for (const auto& [k, v] : metric->items()) {
      if (!v.is_string()) fail("label " + k + " is not a string");
      s.labels[k] = v.get<std::string>();
    }
    const std::string text = (*value)[1].get<std::string>();
    std::size_t used = 0;
    try {
      s.value = std::stod(text, &used);
    } catch (const std::exception&) {
      fail("bad sample value '" + text + "'");
    }
    if (used != text.size()) fail("bad sample value '" + text + "'");
    if (!std::isfinite(s.value)) continue;
    samples.push_back(std::move(s));
  }
  return samples;
}

PrometheusClient::PrometheusClient(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::vector<Sample> PrometheusClient::Query(const std::string& promql, Timestamp at) const {
  httplib::Client client(base_url_);
  if (!client.is_valid()) throw Error(ErrorCode::kHttpError, "invalid base url " + base_url_);
  const auto seconds = static_cast<time_t>(timeout_s_);
  const auto micros = static_cast<time_t>((timeout_s_ - static_cast<double>(seconds)) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  std::ostringstream time;
  time << std::fixed << std::setprecision(3) << at;
  const httplib::Params params = {{"query", promql}, {"time", time.str()}};
  auto res = client.Get("/api/v1/query", params, httplib::Headers{});
  if (!res) {
    throw Error(ErrorCode::kHttpError, "GET /api/v1/query: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kHttpError, "GET /api/v1/query: HTTP " + std::to_string(res->status));
  }
  return ParseInstantVector(res->body);
}

ScrapeResult PrometheusClient::Scrape(const std::vector<MetricQuerySpec>& specs,
                                      Timestamp at) const {
  ScrapeResult result;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    std::string promql = spec.promql;
    for (auto pos = promql.find("{id}"); pos != std::string::npos; pos = promql.find("{id}", pos)) {
      promql.replace(pos, 4, spec.target_label);
      pos += spec.target_label.size();
    }
    try {
      for (const auto& sample : Query(promql, at)) {
        auto label = sample.labels.find(spec.target_label);
        if (label == sample.labels.end()) continue;
        result.values[{label->second, spec.metric_name}] = sample.value;
      }
    } catch (const Error& e) {
      result.errors.push_back({i, e.code(), spec.metric_name + ": " + e.detail()});
    }
  }
  if (!specs.empty() && result.errors.size() == specs.size()) {
    throw Error(result.errors.front().code, result.errors.front().detail);
  }
  return result;
}

}  // namespace sentinel::ingestion
