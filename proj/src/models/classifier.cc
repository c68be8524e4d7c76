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


#include "sentinel/models/classifier.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "sentinel/core/error.h"

namespace sentinel::models {

using nlohmann::json;

namespace {

[[noreturn]] void BadValue(const std::string& key, const std::string& expected) {
  throw Error(ErrorCode::kInvalidArgument, key + ": expected " + expected);
}

double AsDouble(const json& v, const std::string& key) {
  if (!v.is_number()) BadValue(key, "a number");
  return v.get<double>();
}

int AsInt(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d) return static_cast<int>(d);
  }
  BadValue(key, "an integer");
}

std::uint64_t AsSeed(const json& v, const std::string& key) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    BadValue(key, "a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool AsBool(const json& v, const std::string& key) {
  if (!v.is_boolean()) BadValue(key, "a boolean");
  return v.get<bool>();
}

std::string AsString(const json& v, const std::string& key) {
  if (!v.is_string()) BadValue(key, "a string");
  return v.get<std::string>();
}

template <typename T>
using Setters = std::map<std::string, std::function<void(const json&, T&)>>;

template <typename T>
void Overlay(const json& doc, T& params, const Setters<T>& setters) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "hyperparameters must be a table");
  }
  T next = params;
  for (const auto& [key, value] : doc.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown hyperparameter '" + key + "'");
    }
    it->second(value, next);
  }
  next.Validate();
  params = next;
}

template <typename Variant, typename Fn>
decltype(auto) Visit(const Variant& v, Fn&& fn) {
  return std::visit(std::forward<Fn>(fn), v);
}

}  // namespace

std::string_view UnsupervisedName(UnsupervisedKind kind) {
  switch (kind) {
    case UnsupervisedKind::kIsolationForest: return "iforest";
    case UnsupervisedKind::kDbscan: return "dbscan";
    case UnsupervisedKind::kOcsvm: return "ocsvm";
  }
  return "iforest";
}

std::string_view SupervisedName(SupervisedKind kind) {
  switch (kind) {
    case SupervisedKind::kDecisionTree: return "dtree";
    case SupervisedKind::kLogisticRegression: return "logreg";
    case SupervisedKind::kSvm: return "svm";
  }
  return "dtree";
}

UnsupervisedKind ParseUnsupervised(std::string_view name) {
  for (auto k : {UnsupervisedKind::kIsolationForest, UnsupervisedKind::kDbscan,
                 UnsupervisedKind::kOcsvm}) {
    if (UnsupervisedName(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown unsupervised model '" + std::string(name) +
                  "' (expected iforest, dbscan or ocsvm)");
}

SupervisedKind ParseSupervised(std::string_view name) {
  for (auto k : {SupervisedKind::kDecisionTree, SupervisedKind::kLogisticRegression,
                 SupervisedKind::kSvm}) {
    if (SupervisedName(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown supervised model '" + std::string(name) +
                  "' (expected dtree, logreg or svm)");
}

AnomalyLabeling RunLabeler(const FeatureMatrix& x, const UnsupervisedConfig& config) {
  switch (config.kind) {
    case UnsupervisedKind::kIsolationForest:
      return IsolationForest::Fit(x, config.iforest).Label(x);
    case UnsupervisedKind::kDbscan:
      return DbscanLabel(x, config.dbscan);
    case UnsupervisedKind::kOcsvm:
      return OneClassSvm::Fit(x, config.ocsvm).Label(x);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown unsupervised model");
}

Classifier Classifier::Fit(const LabeledDataset& data, const SupervisedConfig& config) {
  switch (config.kind) {
    case SupervisedKind::kDecisionTree:
      return Classifier(DecisionTree::Fit(data, config.dtree));
    case SupervisedKind::kLogisticRegression:
      return Classifier(LogisticRegression::Fit(data, config.logreg));
    case SupervisedKind::kSvm:
      return Classifier(SvmClassifier::Fit(data, config.svm));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown supervised model");
}

double Classifier::PredictProba(std::span<const double> row) const {
  const double p = Visit(model_, [&](const auto& m) { return m.PredictProba(row); });
  return std::clamp(p, 0.0, 1.0);
}

std::vector<double> Classifier::PredictProba(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = PredictProba(x.row(i));
  return out;
}

std::vector<bool> Classifier::PredictLabel(const FeatureMatrix& x, double threshold) const {
  std::vector<bool> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = PredictProba(x.row(i)) > threshold;
  return out;
}

SupervisedKind Classifier::kind() const {
  return static_cast<SupervisedKind>(model_.index());
}

json Classifier::ToJson() const {
  return {{"model", SupervisedName(kind())},
          {"state", Visit(model_, [](const auto& m) { return m.ToJson(); })}};
}

Classifier Classifier::FromJson(const json& doc) {
  const auto kind = ParseSupervised(doc.at("model").get<std::string>());
  const auto& state = doc.at("state");
  switch (kind) {
    case SupervisedKind::kDecisionTree: return Classifier(DecisionTree::FromJson(state));
    case SupervisedKind::kLogisticRegression:
      return Classifier(LogisticRegression::FromJson(state));
    case SupervisedKind::kSvm: return Classifier(SvmClassifier::FromJson(state));
  }
  throw Error(ErrorCode::kParseError, "unknown classifier");
}

json ParamsToJson(const IsolationForestParams& p) {
  return {{"n_estimators", p.n_estimators}, {"max_samples", p.max_samples},
          {"max_features", p.max_features}, {"bootstrap", p.bootstrap},
          {"contamination", p.contamination}, {"rng_seed", p.rng_seed}};
}

json ParamsToJson(const DbscanParams& p) {
  return {{"eps", p.eps}, {"min_samples", p.min_samples}, {"metric", "euclidean"}};
}

json ParamsToJson(const OcsvmParams& p) {
  return {{"kernel", "linear"}, {"nu", p.nu}, {"learning_rate", p.learning_rate},
          {"epochs", p.epochs}, {"tolerance", p.tolerance}, {"rng_seed", p.rng_seed}};
}

json ParamsToJson(const DecisionTreeParams& p) {
  return {{"criterion", p.criterion == SplitCriterion::kGini ? "gini" : "entropy"},
          {"splitter", p.splitter == Splitter::kBest ? "best" : "random"},
          {"max_depth", p.max_depth},
          {"max_features", p.max_features},
          {"min_samples_leaf", p.min_samples_leaf},
          {"min_samples_split", p.min_samples_split},
          {"rng_seed", p.rng_seed}};
}

json ParamsToJson(const LogRegParams& p) {
  return {{"penalty", p.penalty == Penalty::kL1 ? "l1" : "l2"},
          {"C", p.c},
          {"max_iterations", p.max_iterations},
          {"tolerance", p.tolerance}};
}

json ParamsToJson(const SvmParams& p) {
  return {{"kernel", p.kernel == SvmKernel::kLinear ? "linear" : "rbf"},
          {"C", p.c},
          {"gamma", p.gamma},
          {"smo_tolerance", p.smo_tolerance},
          {"max_passes", p.max_passes},
          {"max_iterations", p.max_iterations},
          {"calibration_fraction", p.calibration_fraction},
          {"rng_seed", p.rng_seed}};
}

void ApplyParams(const json& doc, IsolationForestParams& params) {
  using P = IsolationForestParams;
  static const Setters<P> setters = {
      {"n_estimators", [](const json& v, P& p) { p.n_estimators = AsInt(v, "n_estimators"); }},
      {"max_samples", [](const json& v, P& p) { p.max_samples = AsDouble(v, "max_samples"); }},
      {"max_features", [](const json& v, P& p) { p.max_features = AsDouble(v, "max_features"); }},
      {"bootstrap", [](const json& v, P& p) { p.bootstrap = AsBool(v, "bootstrap"); }},
      {"contamination",
       [](const json& v, P& p) { p.contamination = AsDouble(v, "contamination"); }},
      {"rng_seed", [](const json& v, P& p) { p.rng_seed = AsSeed(v, "rng_seed"); }},
  };
  Overlay(doc, params, setters);
}

void ApplyParams(const json& doc, DbscanParams& params) {
  using P = DbscanParams;
  static const Setters<P> setters = {
      {"eps", [](const json& v, P& p) { p.eps = AsDouble(v, "eps"); }},
      {"min_samples", [](const json& v, P& p) { p.min_samples = AsInt(v, "min_samples"); }},
      {"metric",
       [](const json& v, P&) {
         if (AsString(v, "metric") != "euclidean") BadValue("metric", "\"euclidean\"");
       }},
  };
  Overlay(doc, params, setters);
}

void ApplyParams(const json& doc, OcsvmParams& params) {
  using P = OcsvmParams;
  static const Setters<P> setters = {
      {"kernel",
       [](const json& v, P&) {
         if (AsString(v, "kernel") != "linear") BadValue("kernel", "\"linear\"");
       }},
      {"nu", [](const json& v, P& p) { p.nu = AsDouble(v, "nu"); }},
      {"learning_rate",
       [](const json& v, P& p) { p.learning_rate = AsDouble(v, "learning_rate"); }},
      {"epochs", [](const json& v, P& p) { p.epochs = AsInt(v, "epochs"); }},
      {"tolerance", [](const json& v, P& p) { p.tolerance = AsDouble(v, "tolerance"); }},
      {"rng_seed", [](const json& v, P& p) { p.rng_seed = AsSeed(v, "rng_seed"); }},
  };
  Overlay(doc, params, setters);
}

void ApplyParams(const json& doc, DecisionTreeParams& params) {
  using P = DecisionTreeParams;
  static const Setters<P> setters = {
      {"criterion",
       [](const json& v, P& p) {
         const auto s = AsString(v, "criterion");
         if (s == "gini") p.criterion = SplitCriterion::kGini;
         else if (s == "entropy") p.criterion = SplitCriterion::kEntropy;
         else BadValue("criterion", "\"gini\" or \"entropy\"");
       }},
      {"splitter",
       [](const json& v, P& p) {
         const auto s = AsString(v, "splitter");
         if (s == "best") p.splitter = Splitter::kBest;
         else if (s == "random") p.splitter = Splitter::kRandom;
         else BadValue("splitter", "\"best\" or \"random\"");
       }},
      {"max_depth", [](const json& v, P& p) { p.max_depth = AsInt(v, "max_depth"); }},
      {"max_features", [](const json& v, P& p) { p.max_features = AsDouble(v, "max_features"); }},
      {"min_samples_leaf",
       [](const json& v, P& p) { p.min_samples_leaf = AsInt(v, "min_samples_leaf"); }},
      {"min_samples_split",
       [](const json& v, P& p) { p.min_samples_split = AsInt(v, "min_samples_split"); }},
      {"rng_seed", [](const json& v, P& p) { p.rng_seed = AsSeed(v, "rng_seed"); }},
  };
  Overlay(doc, params, setters);
}

void ApplyParams(const json& doc, LogRegParams& params) {
  using P = LogRegParams;
  static const Setters<P> setters = {
      {"penalty",
       [](const json& v, P& p) {
         const auto s = AsString(v, "penalty");
         if (s == "l1") p.penalty = Penalty::kL1;
         else if (s == "l2") p.penalty = Penalty::kL2;
         else BadValue("penalty", "\"l1\" or \"l2\"");
       }},
      {"C", [](const json& v, P& p) { p.c = AsDouble(v, "C"); }},
      {"max_iterations",
       [](const json& v, P& p) { p.max_iterations = AsInt(v, "max_iterations"); }},
      {"tolerance", [](const json& v, P& p) { p.tolerance = AsDouble(v, "tolerance"); }},
  };
  Overlay(doc, params, setters);
}

void ApplyParams(const json& doc, SvmParams& params) {
  using P = SvmParams;
  static const Setters<P> setters = {
      {"kernel",
       [](const json& v, P& p) {
         const auto s = AsString(v, "kernel");
         if (s == "linear") p.kernel = SvmKernel::kLinear;
         else if (s == "rbf") p.kernel = SvmKernel::kRbf;
         else BadValue("kernel", "\"linear\" or \"rbf\"");
       }},
      {"C", [](const json& v, P& p) { p.c = AsDouble(v, "C"); }},
      {"gamma", [](const json& v, P& p) { p.gamma = AsDouble(v, "gamma"); }},
      {"smo_tolerance",
       [](const json& v, P& p) { p.smo_tolerance = AsDouble(v, "smo_tolerance"); }},
      {"max_passes", [](const json& v, P& p) { p.max_passes = AsInt(v, "max_passes"); }},
      {"max_iterations",
       [](const json& v, P& p) { p.max_iterations = AsInt(v, "max_iterations"); }},
      {"calibration_fraction",
       [](const json& v, P& p) {
         p.calibration_fraction = AsDouble(v, "calibration_fraction");
       }},
      {"rng_seed", [](const json& v, P& p) { p.rng_seed = AsSeed(v, "rng_seed"); }},
  };
  Overlay(doc, params, setters);
}

}  // namespace sentinel::models
