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


#include "sentinel/pipeline/config.h"

#include <cmath>
#include <set>

#include "sentinel/pipeline/order.h"
#include "sentinel/pipeline/toml.h"

namespace sentinel::pipeline {

namespace {

using nlohmann::json;

const std::vector<std::string> kWorkloadMetrics = {"cpu_usage", "mem_usage", "net_rx",
                                                   "net_tx"};

KindPolicy Aggregator(ComponentKind kind, EdgeType edge, Direction direction) {
  KindPolicy p;
  p.kind = kind;
  p.mode = PolicyMode::kAggregator;
  p.aggregate_edges = {{edge, direction}};
  return p;
}

PolicyMode ParseMode(std::string_view name) {
  if (name == "modeled") return PolicyMode::kModeled;
  if (name == "aggregator") return PolicyMode::kAggregator;
  if (name == "disabled") return PolicyMode::kDisabled;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mode '" + std::string(name) + "' (modeled, aggregator, disabled)");
}

// Collects field errors while walking a document.
class Reader {
 public:
  std::vector<FieldError>& errors() { return errors_; }

  void Add(std::string field, std::string message) {
    errors_.push_back({std::move(field), std::move(message)});
  }

  // Runs `fn`, turning any exception into a field error.
  template <typename Fn>
  void Try(const std::string& field, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      Add(field, e.detail());
    } catch (const std::exception& e) {
      Add(field, e.what());
    }
  }

  bool Table(const json& doc, const std::string& field) {
    if (doc.is_object()) return true;
    Add(field, "expected a table");
    return false;
  }

  void Unknown(const json& doc, const std::string& prefix,
               const std::set<std::string>& known) {
    for (const auto& [key, value] : doc.items()) {
      if (!known.contains(key)) Add(prefix + key, "unknown key");
    }
  }

  template <typename T>
  void Number(const json& doc, const std::string& key, const std::string& field, T& out) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) return Add(field, "expected a number");
      out = v.get<T>();
    } else {
      if (!v.is_number_integer()) return Add(field, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.get<std::int64_t>() < 0) return Add(field, "must be >= 0");
      }
      out = v.get<T>();
    }
  }

  void String(const json& doc, const std::string& key, const std::string& field,
              std::string& out) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_string()) return Add(field, "expected a string");
    out = doc.at(key).get<std::string>();
  }

 private:
  std::vector<FieldError> errors_;
};

NeighborFeature NeighborFeatureFromJson(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "expected a table");
  for (const auto& [key, value] : doc.items()) {
    if (key != "edge" && key != "direction" && key != "metric" && key != "aggregation") {
      throw Error(ErrorCode::kInvalidArgument, "unknown key '" + key + "'");
    }
  }
  NeighborFeature f;
  f.edge_type = ParseEdgeType(doc.at("edge").get<std::string>());
  f.direction = ParseDirection(doc.value("direction", std::string("out")));
  f.metric = doc.at("metric").get<std::string>();
  f.aggregation = ParseAggregation(doc.value("aggregation", std::string("mean")));
  return f;
}

// Either {edge, direction} or "EDGE:direction".
AggregateEdge AggregateEdgeFromJson(const json& doc) {
  AggregateEdge e;
  if (doc.is_string()) {
    const auto text = doc.get<std::string>();
    const auto colon = text.find(':');
    e.edge_type = ParseEdgeType(text.substr(0, colon));
    if (colon != std::string::npos) e.direction = ParseDirection(text.substr(colon + 1));
    return e;
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "expected a table or \"EDGE:direction\"");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "edge" && key != "direction") {
      throw Error(ErrorCode::kInvalidArgument, "unknown key '" + key + "'");
    }
  }
  e.edge_type = ParseEdgeType(doc.at("edge").get<std::string>());
  e.direction = ParseDirection(doc.value("direction", std::string("out")));
  return e;
}

void ApplyKind(const json& doc, const std::string& prefix, KindPolicy& policy, Reader& r) {
  r.Unknown(doc, prefix,
            {"mode", "features", "neighbor_features", "aggregate_edges", "unsupervised",
             "supervised", "iforest", "dbscan", "ocsvm", "dtree", "logreg", "svm"});
  if (doc.contains("mode")) {
    r.Try(prefix + "mode", [&] { policy.mode = ParseMode(doc.at("mode").get<std::string>()); });
  }
  if (doc.contains("features")) {
    r.Try(prefix + "features", [&] {
      policy.features = doc.at("features").get<std::vector<std::string>>();
    });
  }
  if (doc.contains("neighbor_features")) {
    const auto& list = doc.at("neighbor_features");
    if (!list.is_array()) {
      r.Add(prefix + "neighbor_features", "expected an array");
    } else {
      policy.neighbor_features.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        r.Try(prefix + "neighbor_features[" + std::to_string(i) + "]",
              [&] { policy.neighbor_features.push_back(NeighborFeatureFromJson(list[i])); });
      }
    }
  }
  if (doc.contains("aggregate_edges")) {
    const auto& list = doc.at("aggregate_edges");
    if (!list.is_array()) {
      r.Add(prefix + "aggregate_edges", "expected an array");
    } else {
      policy.aggregate_edges.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        r.Try(prefix + "aggregate_edges[" + std::to_string(i) + "]",
              [&] { policy.aggregate_edges.push_back(AggregateEdgeFromJson(list[i])); });
      }
    }
  }
  if (doc.contains("unsupervised")) {
    r.Try(prefix + "unsupervised", [&] {
      policy.unsupervised.kind =
          models::ParseUnsupervised(doc.at("unsupervised").get<std::string>());
    });
  }
  if (doc.contains("supervised")) {
    r.Try(prefix + "supervised", [&] {
      policy.supervised.kind = models::ParseSupervised(doc.at("supervised").get<std::string>());
    });
  }
  auto params = [&](const char* key, auto& target) {
    if (doc.contains(key)) r.Try(prefix + key, [&] { models::ApplyParams(doc.at(key), target); });
  };
  params("iforest", policy.unsupervised.iforest);
  params("dbscan", policy.unsupervised.dbscan);
  params("ocsvm", policy.unsupervised.ocsvm);
  params("dtree", policy.supervised.dtree);
  params("logreg", policy.supervised.logreg);
  params("svm", policy.supervised.svm);
}

std::string JoinFields(const std::vector<FieldError>& fields) {
  std::string text;
  for (const auto& f : fields) {
    if (!text.empty()) text += "; ";
    text += f.field + ": " + f.message;
  }
  return text;
}

}  // namespace

std::string_view AggregationName(Aggregation a) {
  switch (a) {
    case Aggregation::kMean: return "mean";
    case Aggregation::kMax: return "max";
    case Aggregation::kSum: return "sum";
  }
  return "mean";
}

Aggregation ParseAggregation(std::string_view name) {
  if (name == "mean") return Aggregation::kMean;
  if (name == "max") return Aggregation::kMax;
  if (name == "sum") return Aggregation::kSum;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown aggregation '" + std::string(name) + "' (mean, max, sum)");
}

std::string NeighborFeature::name() const {
  return std::string(EdgeTypeName(edge_type)) + "." + std::string(DirectionName(direction)) +
         "." + metric + "." + std::string(AggregationName(aggregation));
}

std::string_view PolicyModeName(PolicyMode mode) {
  switch (mode) {
    case PolicyMode::kModeled: return "modeled";
    case PolicyMode::kAggregator: return "aggregator";
    case PolicyMode::kDisabled: return "disabled";
  }
  return "disabled";
}

std::vector<std::string> KindPolicy::FeatureNames() const {
  std::vector<std::string> names = features;
  for (const auto& f : neighbor_features) names.push_back(f.name());
  return names;
}

KindPolicy DefaultPolicy(ComponentKind kind) {
  using K = ComponentKind;
  KindPolicy p;
  p.kind = kind;
  switch (kind) {
    case K::kContainer:
      p.features = kWorkloadMetrics;
      return p;
    case K::kPod:
      p.features = kWorkloadMetrics;
      p.neighbor_features = {
          {EdgeType::kRunsOn, Direction::kOut, "cpu_util", Aggregation::kMean},
          {EdgeType::kRunsOn, Direction::kOut, "mem_util", Aggregation::kMean},
      };
      return p;
    case K::kNode:
      p.features = {"cpu_util", "mem_util", "pod_count"};
      return p;
    case K::kReplicaSet:
      return Aggregator(kind, EdgeType::kManages, Direction::kOut);
    case K::kDeployment:
      return Aggregator(kind, EdgeType::kManages, Direction::kOut);
    case K::kStatefulSet:
      return Aggregator(kind, EdgeType::kManages, Direction::kOut);
    case K::kNamespace:
      return Aggregator(kind, EdgeType::kBelongsTo, Direction::kIn);
    case K::kCluster:
      return Aggregator(kind, EdgeType::kBelongsTo, Direction::kIn);
    case K::kService:
      return Aggregator(kind, EdgeType::kSelects, Direction::kOut);
    case K::kPort:
    case K::kLabel:
      p.mode = PolicyMode::kDisabled;
      return p;
  }
  return p;
}

PipelineConfig PipelineConfig::Default() {
  PipelineConfig config;
  for (ComponentKind kind : kAllKinds) config.kinds[kind] = DefaultPolicy(kind);
  return config;
}

const KindPolicy* PipelineConfig::Policy(ComponentKind kind) const {
  auto it = kinds.find(kind);
  return it == kinds.end() ? nullptr : &it->second;
}

graph::MetricSchema PipelineConfig::Schema() const {
  auto schema = graph::DefaultMetricSchema();
  for (const auto& [kind, policy] : kinds) {
    if (policy.mode != PolicyMode::kModeled) continue;
    schema[kind].insert(policy.features.begin(), policy.features.end());
  }
  for (const auto& q : live.queries) schema[q.kind].insert(q.metric_name);
  return schema;
}

ConfigError::ConfigError(std::vector<FieldError> fields)
    : Error(ErrorCode::kInvalidConfig, JoinFields(fields)), fields_(std::move(fields)) {}

std::vector<FieldError> ValidateConfig(const PipelineConfig& config) {
  Reader r;
  auto positive = [&](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) r.Add(field, "must be > 0");
  };
  positive(config.update_graph_interval_s, "pipeline.update_graph_interval_s");
  positive(config.update_models_interval_s, "pipeline.update_models_interval_s");
  if (config.max_observations < 1) r.Add("pipeline.max_observations", "must be >= 1");
  if (config.min_training_rows < 2) r.Add("pipeline.min_training_rows", "must be >= 2");
  if (config.min_training_rows > config.max_observations) {
    r.Add("pipeline.min_training_rows", "must not exceed max_observations");
  }
  const auto& o = config.outliers;
  if (!(o.fraction > 0.0 && o.fraction < 0.5)) r.Add("outliers.fraction", "must be in (0, 0.5)");
  positive(o.sigma_shift, "outliers.sigma_shift");
  if (o.min_count < 1) r.Add("outliers.min_count", "must be >= 1");

  for (const auto& [kind, policy] : config.kinds) {
    const std::string prefix = "kinds." + std::string(KindName(kind)) + ".";
    if (policy.kind != kind) r.Add(prefix + "kind", "does not match its table");
    if (policy.mode == PolicyMode::kModeled) {
      const auto names = policy.FeatureNames();
      if (names.empty()) r.Add(prefix + "features", "a modeled kind needs at least one feature");
      std::set<std::string> seen;
      for (const auto& n : names) {
        if (n.empty()) r.Add(prefix + "features", "empty feature name");
        if (!seen.insert(n).second) r.Add(prefix + "features", "duplicate feature '" + n + "'");
      }
      for (const auto& f : policy.neighbor_features) {
        if (f.metric.empty()) r.Add(prefix + "neighbor_features", "empty metric");
        if (NeighborKinds(kind, f.edge_type, f.direction).empty()) {
          r.Add(prefix + "neighbor_features",
                f.name() + " reaches no kind in the resource model");
        }
      }
      r.Try(prefix + "unsupervised", [&] {
        policy.unsupervised.iforest.Validate();
        policy.unsupervised.dbscan.Validate();
        policy.unsupervised.ocsvm.Validate();
      });
      r.Try(prefix + "supervised", [&] {
        policy.supervised.dtree.Validate();
        policy.supervised.logreg.Validate();
        policy.supervised.svm.Validate();
      });
    } else if (policy.mode == PolicyMode::kAggregator) {
      if (policy.aggregate_edges.empty()) {
        r.Add(prefix + "aggregate_edges", "an aggregator kind needs at least one edge type");
      }
      for (const auto& e : policy.aggregate_edges) {
        if (NeighborKinds(kind, e.edge_type, e.direction).empty()) {
          r.Add(prefix + "aggregate_edges",
                std::string(EdgeTypeName(e.edge_type)) + ":" +
                    std::string(DirectionName(e.direction)) +
                    " reaches no kind in the resource model");
        }
      }
    }
  }
  r.Try("kinds", [&] { EvaluationOrder(config.kinds); });
  if (config.evaluation_order) {
    const auto reason = CheckOrder(*config.evaluation_order, config.kinds);
    if (!reason.empty()) r.Add("pipeline.evaluation_order", reason);
  }
  r.Try("simulator", [&] { config.simulator.Validate(); });
  positive(config.live.scrape_timeout_s, "live.scrape_timeout_s");
  r.Try("live.queries", [&] {
    for (const auto& q : config.live.queries) q.Validate();
    ValidateQuerySpecs(config.live.queries);
  });
  return std::move(r.errors());
}

json ConfigToJson(const PipelineConfig& config) {
  json pipeline = {{"update_graph_interval_s", config.update_graph_interval_s},
                   {"update_models_interval_s", config.update_models_interval_s},
                   {"max_observations", config.max_observations},
                   {"min_training_rows", config.min_training_rows},
                   {"seed", config.seed}};
  if (config.evaluation_order) {
    json order = json::array();
    for (auto k : *config.evaluation_order) order.push_back(KindName(k));
    pipeline["evaluation_order"] = std::move(order);
  }
  json kinds = json::object();
  for (const auto& [kind, p] : config.kinds) {
    json doc = {{"mode", PolicyModeName(p.mode)}};
    if (p.mode == PolicyMode::kModeled) {
      doc["features"] = p.features;
      json neighbors = json::array();
      for (const auto& f : p.neighbor_features) {
        neighbors.push_back({{"edge", EdgeTypeName(f.edge_type)},
                             {"direction", DirectionName(f.direction)},
                             {"metric", f.metric},
                             {"aggregation", AggregationName(f.aggregation)}});
      }
      doc["neighbor_features"] = std::move(neighbors);
      doc["unsupervised"] = models::UnsupervisedName(p.unsupervised.kind);
      doc["supervised"] = models::SupervisedName(p.supervised.kind);
      doc["iforest"] = models::ParamsToJson(p.unsupervised.iforest);
      doc["dbscan"] = models::ParamsToJson(p.unsupervised.dbscan);
      doc["ocsvm"] = models::ParamsToJson(p.unsupervised.ocsvm);
      doc["dtree"] = models::ParamsToJson(p.supervised.dtree);
      doc["logreg"] = models::ParamsToJson(p.supervised.logreg);
      doc["svm"] = models::ParamsToJson(p.supervised.svm);
    } else if (p.mode == PolicyMode::kAggregator) {
      json edges = json::array();
      for (const auto& e : p.aggregate_edges) {
        edges.push_back(
            {{"edge", EdgeTypeName(e.edge_type)}, {"direction", DirectionName(e.direction)}});
      }
      doc["aggregate_edges"] = std::move(edges);
    }
    kinds[std::string(KindName(kind))] = std::move(doc);
  }
  json queries = json::array();
  for (const auto& q : config.live.queries) queries.push_back(ingestion::QuerySpecToJson(q));
  return {{"pipeline", std::move(pipeline)},
          {"outliers",
           {{"fraction", config.outliers.fraction},
            {"sigma_shift", config.outliers.sigma_shift},
            {"min_count", config.outliers.min_count}}},
          {"kinds", std::move(kinds)},
          {"simulator", ingestion::SpecToJson(config.simulator)},
          {"live",
           {{"prometheus_url", config.live.prometheus_url},
            {"topology_file", config.live.topology_file},
            {"scrape_timeout_s", config.live.scrape_timeout_s},
            {"queries", std::move(queries)}}}};
}

PipelineConfig ConfigFromJson(const json& doc) {
  PipelineConfig config = PipelineConfig::Default();
  Reader r;
  if (!r.Table(doc, "(root)")) throw ConfigError(std::move(r.errors()));
  r.Unknown(doc, "", {"pipeline", "outliers", "kinds", "simulator", "live"});

  if (doc.contains("pipeline") && r.Table(doc.at("pipeline"), "pipeline")) {
    const auto& p = doc.at("pipeline");
    r.Unknown(p, "pipeline.",
              {"update_graph_interval_s", "update_models_interval_s", "max_observations",
               "min_training_rows", "seed", "evaluation_order"});
    r.Number(p, "update_graph_interval_s", "pipeline.update_graph_interval_s",
             config.update_graph_interval_s);
    r.Number(p, "update_models_interval_s", "pipeline.update_models_interval_s",
             config.update_models_interval_s);
    r.Number(p, "max_observations", "pipeline.max_observations", config.max_observations);
    r.Number(p, "min_training_rows", "pipeline.min_training_rows", config.min_training_rows);
    r.Number(p, "seed", "pipeline.seed", config.seed);
    if (p.contains("evaluation_order")) {
      r.Try("pipeline.evaluation_order", [&] {
        std::vector<ComponentKind> order;
        for (const auto& name : p.at("evaluation_order").get<std::vector<std::string>>()) {
          order.push_back(ParseKind(name));
        }
        config.evaluation_order = std::move(order);
      });
    }
  }

  if (doc.contains("outliers") && r.Table(doc.at("outliers"), "outliers")) {
    const auto& o = doc.at("outliers");
    r.Unknown(o, "outliers.", {"fraction", "sigma_shift", "min_count"});
    r.Number(o, "fraction", "outliers.fraction", config.outliers.fraction);
    r.Number(o, "sigma_shift", "outliers.sigma_shift", config.outliers.sigma_shift);
    r.Number(o, "min_count", "outliers.min_count", config.outliers.min_count);
  }

  if (doc.contains("kinds") && r.Table(doc.at("kinds"), "kinds")) {
    for (const auto& [name, body] : doc.at("kinds").items()) {
      const std::string prefix = "kinds." + name + ".";
      const auto kind = TryParseKind(name);
      if (!kind) {
        r.Add("kinds." + name, "unknown component kind");
        continue;
      }
      if (!r.Table(body, "kinds." + name)) continue;
      ApplyKind(body, prefix, config.kinds[*kind], r);
    }
  }

  if (doc.contains("simulator")) {
    r.Try("simulator", [&] { ingestion::ApplySpecJson(doc.at("simulator"), config.simulator); });
  }

  if (doc.contains("live") && r.Table(doc.at("live"), "live")) {
    const auto& l = doc.at("live");
    r.Unknown(l, "live.", {"prometheus_url", "topology_file", "scrape_timeout_s", "queries"});
    r.String(l, "prometheus_url", "live.prometheus_url", config.live.prometheus_url);
    r.String(l, "topology_file", "live.topology_file", config.live.topology_file);
    r.Number(l, "scrape_timeout_s", "live.scrape_timeout_s", config.live.scrape_timeout_s);
    if (l.contains("queries")) {
      const auto& list = l.at("queries");
      if (!list.is_array()) {
        r.Add("live.queries", "expected an array");
      } else {
        config.live.queries.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
          r.Try("live.queries[" + std::to_string(i) + "]", [&] {
            config.live.queries.push_back(ingestion::QuerySpecFromJson(list[i]));
          });
        }
      }
    }
  }

  if (r.errors().empty()) {
    for (auto& e : ValidateConfig(config)) r.errors().push_back(std::move(e));
  }
  if (!r.errors().empty()) throw ConfigError(std::move(r.errors()));
  return config;
}

PipelineConfig LoadConfigFile(const std::string& path) {
  return ConfigFromJson(ParseTomlFile(path));
}

}  // namespace sentinel::pipeline
