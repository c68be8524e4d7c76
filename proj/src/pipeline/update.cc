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


#include "sentinel/pipeline/update.h"

#include <chrono>
#include <numeric>
#include <set>

#include "sentinel/core/random.h"
#include "sentinel/pipeline/order.h"
#include "sentinel/pipeline/outliers.h"

namespace sentinel::pipeline {

namespace {

using nlohmann::json;

json IssuesToJson(const std::vector<ExtractionIssue>& issues) {
  json out = json::array();
  for (const auto& i : issues) out.push_back({{"node_id", i.node_id}, {"detail", i.detail}});
  return out;
}

void ScoreModeled(GraphView& view, const KindPolicy& policy, const BundleRegistry& bundles,
                  ObservationStore* observations, Timestamp now, KindScoreReport& report) {
  auto extraction = ExtractFeatures(view, policy);
  report.excluded = std::move(extraction.excluded);
  report.zero_filled = std::move(extraction.zero_filled);
  report.no_nodes = extraction.no_nodes;
  if (extraction.ids.empty()) return;
  if (observations) observations->Append(policy.kind, now, extraction.ids, extraction.x);

  const auto bundle = bundles.Get(policy.kind);
  if (!bundle) {
    report.error = ErrorCode::kMissingBundle;
    report.error_detail = "no bundle for " + std::string(KindName(policy.kind));
    return;
  }
  if (bundle->feature_names != extraction.columns) {
    report.error = ErrorCode::kDimensionMismatch;
    report.error_detail = "bundle v" + std::to_string(bundle->version) +
                          " was trained on different features; retrain pending";
    return;
  }
  report.bundle_version = bundle->version;
  const auto standardized = bundle->standardizer.Transform(extraction.x);
  const auto proba = bundle->classifier.PredictProba(standardized);
  for (std::size_t i = 0; i < extraction.ids.size(); ++i) {
    report.scores[extraction.ids[i]] = proba[i];
    view.OverlayScore(extraction.ids[i], proba[i]);
  }
}

void ScoreAggregator(GraphView& view, const KindPolicy& policy, KindScoreReport& report) {
  const auto nodes = view.NodesOfKind(policy.kind);
  report.no_nodes = nodes.empty();
  for (const auto* node : nodes) {
    std::set<std::string> seen;
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& e : policy.aggregate_edges) {
      for (const auto* other : view.Neighbors(node->id, e.edge_type, e.direction)) {
        if (!seen.insert(other->id).second) continue;
        if (auto s = view.Score(other->id)) {
          sum += *s;
          ++count;
        }
      }
    }
    if (count == 0) {
      report.cleared.push_back(node->id);
      view.OverlayScore(node->id, std::nullopt);
      continue;
    }
    const double mean = std::clamp(sum / static_cast<double>(count), 0.0, 1.0);
    report.scores[node->id] = mean;
    view.OverlayScore(node->id, mean);
  }
}

std::uint64_t KindSeed(const PipelineConfig& config, ComponentKind kind, std::uint64_t stream) {
  return DeriveSeed(config.seed, static_cast<std::uint64_t>(kind) * 16 + stream);
}

}  // namespace

const KindScoreReport* TickReport::Find(ComponentKind kind) const {
  for (const auto& k : kinds) {
    if (k.kind == kind) return &k;
  }
  return nullptr;
}

std::map<std::string, double> TickReport::AllScores() const {
  std::map<std::string, double> out;
  for (const auto& k : kinds) out.insert(k.scores.begin(), k.scores.end());
  return out;
}

json TickReport::ToJson() const {
  json order_doc = json::array();
  for (auto k : order) order_doc.push_back(KindName(k));
  json kinds_doc = json::array();
  for (const auto& k : kinds) {
    json doc = {{"kind", KindName(k.kind)},
                {"mode", PolicyModeName(k.mode)},
                {"bundle_version", k.bundle_version},
                {"scores", k.scores},
                {"cleared", k.cleared},
                {"excluded", IssuesToJson(k.excluded)},
                {"zero_filled", IssuesToJson(k.zero_filled)},
                {"no_nodes", k.no_nodes}};
    if (k.error) {
      doc["error"] = {{"error", ErrorCodeName(*k.error)}, {"detail", k.error_detail}};
    }
    kinds_doc.push_back(std::move(doc));
  }
  return {{"at", at}, {"order", std::move(order_doc)}, {"kinds", std::move(kinds_doc)}};
}

std::vector<ComponentKind> ResolveOrder(const PipelineConfig& config) {
  if (config.evaluation_order) return *config.evaluation_order;
  return EvaluationOrder(config.kinds);
}

TickReport ScoreSnapshot(const graph::GraphSnapshot& snapshot, const BundleRegistry& bundles,
                         ObservationStore* observations, const PipelineConfig& config,
                         Timestamp now) {
  TickReport report;
  report.at = now;
  report.order = ResolveOrder(config);
  GraphView view(snapshot);
  for (ComponentKind kind : report.order) {
    const auto* policy = config.Policy(kind);
    KindScoreReport k;
    k.kind = kind;
    k.mode = policy->mode;
    try {
      if (policy->mode == PolicyMode::kModeled) {
        ScoreModeled(view, *policy, bundles, observations, now, k);
      } else if (policy->mode == PolicyMode::kAggregator) {
        ScoreAggregator(view, *policy, k);
      }
    } catch (const Error& e) {
      k.scores.clear();
      k.error = e.code();
      k.error_detail = e.detail();
    }
    report.kinds.push_back(std::move(k));
  }
  return report;
}

TickReport UpdateGraph(graph::GraphStore& graph, const BundleRegistry& bundles,
                       ObservationStore& observations, const PipelineConfig& config,
                       Timestamp now, bool record_observations) {
  const auto snapshot = graph.Snapshot();
  auto report =
      ScoreSnapshot(snapshot, bundles, record_observations ? &observations : nullptr, config, now);
  graph.Write([&](graph::Transaction& tx) {
    for (const auto& k : report.kinds) {
      const auto source =
          k.mode == PolicyMode::kAggregator ? ScoreSource::kAggregate : ScoreSource::kModel;
      // Nodes removed since the snapshot are skipped.
      for (const auto& [id, score] : k.scores) {
        try {
          tx.SetAnomalyScore(id, score, source, now);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNotFound) throw;
        }
      }
      for (const auto& id : k.cleared) {
        try {
          tx.ClearAnomalyScore(id, now);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNotFound) throw;
        }
      }
    }
  });
  return report;
}

std::string_view TrainingStatusName(TrainingStatus status) {
  switch (status) {
    case TrainingStatus::kTrained: return "trained";
    case TrainingStatus::kInsufficientData: return "insufficient_data";
    case TrainingStatus::kFailed: return "failed";
  }
  return "failed";
}

const KindTrainingReport* ModelUpdateReport::Find(ComponentKind kind) const {
  for (const auto& k : kinds) {
    if (k.kind == kind) return &k;
  }
  return nullptr;
}

bool ModelUpdateReport::all_trained() const {
  return std::all_of(kinds.begin(), kinds.end(),
                     [](const auto& k) { return k.status == TrainingStatus::kTrained; });
}

json ModelUpdateReport::ToJson() const {
  json kinds_doc = json::array();
  for (const auto& k : kinds) {
    json doc = {{"kind", KindName(k.kind)},
                {"status", TrainingStatusName(k.status)},
                {"rows", k.rows},
                {"needed", k.needed},
                {"version", k.version},
                {"labeled_anomalies", k.labeled_anomalies},
                {"synthetic_outliers", k.synthetic_outliers},
                {"fit_time_s", k.fit_time_s}};
    if (k.error) {
      doc["error"] = {{"error", ErrorCodeName(*k.error)}, {"detail", k.error_detail}};
    }
    kinds_doc.push_back(std::move(doc));
  }
  return {{"at", at}, {"kinds", std::move(kinds_doc)}};
}

ModelBundle TrainBundle(const KindPolicy& policy, const models::FeatureMatrix& x,
                        const PipelineConfig& config, Timestamp now) {
  ModelBundle bundle;
  bundle.kind = policy.kind;
  bundle.feature_names = x.feature_names();
  bundle.trained_at = now;
  bundle.training_rows = x.rows();
  bundle.fingerprint = MatrixFingerprint(x);
  bundle.labeler = policy.unsupervised.kind;
  bundle.standardizer = models::Standardizer::Fit(x);
  const auto standardized = bundle.standardizer.Transform(x);

  auto unsupervised = policy.unsupervised;
  unsupervised.iforest.rng_seed ^= KindSeed(config, policy.kind, 0);
  unsupervised.ocsvm.rng_seed ^= KindSeed(config, policy.kind, 1);
  const auto labeling = models::RunLabeler(standardized, unsupervised);
  bundle.labeled_anomalies = labeling.anomaly_count();

  models::LabeledDataset data{standardized, labeling.labels};
  if (bundle.labeled_anomalies == 0 || bundle.labeled_anomalies == x.rows()) {
    // All-anomalous labelings are as uninformative as empty ones.
    std::vector<bool> normal(x.rows(), false);
    auto injected = InjectSyntheticOutliers(standardized, normal, config.outliers,
                                            KindSeed(config, policy.kind, 2));
    bundle.synthetic_outliers = injected.sources.size();
    data = std::move(injected.data);
  }

  auto supervised = policy.supervised;
  supervised.dtree.rng_seed ^= KindSeed(config, policy.kind, 3);
  supervised.svm.rng_seed ^= KindSeed(config, policy.kind, 4);
  bundle.classifier = models::Classifier::Fit(data, supervised);
  return bundle;
}

ModelUpdateReport UpdateModels(const ObservationStore& observations, BundleRegistry& bundles,
                               const PipelineConfig& config, Timestamp now) {
  ModelUpdateReport report;
  report.at = now;
  for (ComponentKind kind : ResolveOrder(config)) {
    const auto* policy = config.Policy(kind);
    if (policy->mode != PolicyMode::kModeled) continue;
    KindTrainingReport k;
    k.kind = kind;
    k.needed = config.min_training_rows;
    if (auto previous = bundles.Get(kind)) k.version = previous->version;
    const auto matrix = observations.Matrix(kind);
    k.rows = matrix ? matrix->rows() : 0;
    if (k.rows < config.min_training_rows) {
      k.status = TrainingStatus::kInsufficientData;
      k.error = ErrorCode::kInsufficientData;
      k.error_detail = std::string(KindName(kind)) + ": have " + std::to_string(k.rows) +
                       ", need " + std::to_string(k.needed);
      report.kinds.push_back(std::move(k));
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      auto published = bundles.Publish(TrainBundle(*policy, *matrix, config, now));
      k.version = published->version;
      k.labeled_anomalies = published->labeled_anomalies;
      k.synthetic_outliers = published->synthetic_outliers;
    } catch (const Error& e) {
      k.status = TrainingStatus::kFailed;
      k.error = e.code();
      k.error_detail = e.detail();
    } catch (const std::exception& e) {
      k.status = TrainingStatus::kFailed;
      k.error = ErrorCode::kInvalidArgument;
      k.error_detail = e.what();
    }
    k.fit_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.kinds.push_back(std::move(k));
  }
  return report;
}

}  // namespace sentinel::pipeline
