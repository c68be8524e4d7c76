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


// Uniform front ends over the concrete models: one call that labels a
// matrix with the configured unsupervised model, and a probabilistic
// classifier that hides which supervised model sits behind it.

#ifndef SENTINEL_MODELS_CLASSIFIER_H_
#define SENTINEL_MODELS_CLASSIFIER_H_

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sentinel/models/dbscan.h"
#include "sentinel/models/decision_tree.h"
#include "sentinel/models/isolation_forest.h"
#include "sentinel/models/labeled_dataset.h"
#include "sentinel/models/logistic_regression.h"
#include "sentinel/models/one_class_svm.h"
#include "sentinel/models/svm.h"

namespace sentinel::models {

enum class UnsupervisedKind { kIsolationForest, kDbscan, kOcsvm };
enum class SupervisedKind { kDecisionTree, kLogisticRegression, kSvm };

// "iforest", "dbscan", "ocsvm" / "dtree", "logreg", "svm".
std::string_view UnsupervisedName(UnsupervisedKind kind);
std::string_view SupervisedName(SupervisedKind kind);
UnsupervisedKind ParseUnsupervised(std::string_view name);  // kInvalidArgument
SupervisedKind ParseSupervised(std::string_view name);

struct UnsupervisedConfig {
  UnsupervisedKind kind = UnsupervisedKind::kIsolationForest;
  IsolationForestParams iforest;
  DbscanParams dbscan;
  OcsvmParams ocsvm;
};

struct SupervisedConfig {
  SupervisedKind kind = SupervisedKind::kDecisionTree;
  DecisionTreeParams dtree;
  LogRegParams logreg;
  SvmParams svm;
};

AnomalyLabeling RunLabeler(const FeatureMatrix& x, const UnsupervisedConfig& config);

class Classifier {
 public:
  using Model = std::variant<DecisionTree, LogisticRegression, SvmClassifier>;

  static Classifier Fit(const LabeledDataset& data, const SupervisedConfig& config);
  explicit Classifier(Model model) : model_(std::move(model)) {}

  // P(anomalous) in [0, 1]. Throws kDimensionMismatch.
  double PredictProba(std::span<const double> row) const;
  std::vector<double> PredictProba(const FeatureMatrix& x) const;
  // proba > threshold.
  std::vector<bool> PredictLabel(const FeatureMatrix& x, double threshold = 0.5) const;

  SupervisedKind kind() const;
  const Model& model() const { return model_; }

  nlohmann::json ToJson() const;
  static Classifier FromJson(const nlohmann::json& doc);

 private:
  Model model_;
};

// Hyperparameter documents. Apply* overlays the keys present in `doc` onto
// `params` and throws kInvalidArgument naming the first unknown key or bad
// value; the resulting params are validated.
nlohmann::json ParamsToJson(const IsolationForestParams& params);
nlohmann::json ParamsToJson(const DbscanParams& params);
nlohmann::json ParamsToJson(const OcsvmParams& params);
nlohmann::json ParamsToJson(const DecisionTreeParams& params);
nlohmann::json ParamsToJson(const LogRegParams& params);
nlohmann::json ParamsToJson(const SvmParams& params);
void ApplyParams(const nlohmann::json& doc, IsolationForestParams& params);
void ApplyParams(const nlohmann::json& doc, DbscanParams& params);
void ApplyParams(const nlohmann::json& doc, OcsvmParams& params);
void ApplyParams(const nlohmann::json& doc, DecisionTreeParams& params);
void ApplyParams(const nlohmann::json& doc, LogRegParams& params);
void ApplyParams(const nlohmann::json& doc, SvmParams& params);

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_CLASSIFIER_H_
