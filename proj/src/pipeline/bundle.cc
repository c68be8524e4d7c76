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


#include "sentinel/pipeline/bundle.h"

#include <cstdint>
#include <cstring>
#include <cstdio>

namespace sentinel::pipeline {

std::string MatrixFingerprint(const models::FeatureMatrix& x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t shape[2] = {x.rows(), x.cols()};
  mix(shape, sizeof(shape));
  mix(x.values().data(), x.values().size() * sizeof(double));
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return "rows=" + std::to_string(x.rows()) + ";fnv1a=" + hex;
}

nlohmann::json ModelBundle::Summary() const {
  return {{"kind", KindName(kind)},
          {"version", version},
          {"trained_at", trained_at},
          {"feature_names", feature_names},
          {"labeler", models::UnsupervisedName(labeler)},
          {"classifier", models::SupervisedName(classifier.kind())},
          {"training_rows", training_rows},
          {"labeled_anomalies", labeled_anomalies},
          {"synthetic_outliers", synthetic_outliers},
          {"fingerprint", fingerprint}};
}

nlohmann::json ModelBundle::ToJson() const {
  auto doc = Summary();
  doc["standardizer"] = standardizer.ToJson();
  doc["model"] = classifier.ToJson();
  return doc;
}

ModelBundle ModelBundle::FromJson(const nlohmann::json& doc) {
  ModelBundle b;
  b.kind = ParseKind(doc.at("kind").get<std::string>());
  b.version = doc.at("version");
  b.trained_at = doc.at("trained_at");
  b.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
  b.labeler = models::ParseUnsupervised(doc.at("labeler").get<std::string>());
  b.training_rows = doc.at("training_rows");
  b.labeled_anomalies = doc.at("labeled_anomalies");
  b.synthetic_outliers = doc.at("synthetic_outliers");
  b.fingerprint = doc.at("fingerprint");
  b.standardizer = models::Standardizer::FromJson(doc.at("standardizer"));
  b.classifier = models::Classifier::FromJson(doc.at("model"));
  return b;
}

std::shared_ptr<const ModelBundle> BundleRegistry::Get(ComponentKind kind) const {
  std::lock_guard lock(mutex_);
  auto it = bundles_.find(kind);
  return it == bundles_.end() ? nullptr : it->second;
}

std::shared_ptr<const ModelBundle> BundleRegistry::Publish(ModelBundle bundle) {
  std::lock_guard lock(mutex_);
  bundle.version = ++versions_[bundle.kind];
  auto published = std::make_shared<const ModelBundle>(std::move(bundle));
  bundles_[published->kind] = published;
  return published;
}

std::map<ComponentKind, std::shared_ptr<const ModelBundle>> BundleRegistry::All() const {
  std::lock_guard lock(mutex_);
  return bundles_;
}

void BundleRegistry::Clear() {
  std::lock_guard lock(mutex_);
  bundles_.clear();
}

}  // namespace sentinel::pipeline
