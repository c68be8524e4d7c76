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


#ifndef SENTINEL_PIPELINE_BUNDLE_H_
#define SENTINEL_PIPELINE_BUNDLE_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentinel/core/types.h"
#include "sentinel/models/classifier.h"
#include "sentinel/models/standardizer.h"

namespace sentinel::pipeline {

// Everything needed to score one kind. Immutable once published.
struct ModelBundle {
  ComponentKind kind = ComponentKind::kPod;
  std::vector<std::string> feature_names;
  models::Standardizer standardizer;
  models::Classifier classifier{models::Classifier::Model{}};
  models::UnsupervisedKind labeler = models::UnsupervisedKind::kIsolationForest;
  int version = 0;
  Timestamp trained_at = 0.0;
  std::size_t training_rows = 0;      // observations, before injection
  std::size_t labeled_anomalies = 0;  // flagged by the labeler
  std::size_t synthetic_outliers = 0;
  // "rows=<n>;fnv1a=<hex>" over the training matrix.
  std::string fingerprint;

  nlohmann::json ToJson() const;
  // Same as ToJson without the fitted model state.
  nlohmann::json Summary() const;
  static ModelBundle FromJson(const nlohmann::json& doc);
};

std::string MatrixFingerprint(const models::FeatureMatrix& x);

// Latest bundle per kind. Publication swaps a shared pointer, so readers
// holding an older bundle keep a valid, unchanged object.
class BundleRegistry {
 public:
  std::shared_ptr<const ModelBundle> Get(ComponentKind kind) const;
  // Assigns version = previous + 1 (1 for the first) and returns the
  // published bundle.
  std::shared_ptr<const ModelBundle> Publish(ModelBundle bundle);
  std::map<ComponentKind, std::shared_ptr<const ModelBundle>> All() const;
  void Clear();

 private:
  mutable std::mutex mutex_;
  std::map<ComponentKind, std::shared_ptr<const ModelBundle>> bundles_;
  std::map<ComponentKind, int> versions_;
};

}  // namespace sentinel::pipeline

#endif  // SENTINEL_PIPELINE_BUNDLE_H_
