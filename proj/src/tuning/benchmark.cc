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


#include "sentinel/tuning/benchmark.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "sentinel/core/error.h"
#include "sentinel/models/standardizer.h"

namespace sentinel::tuning {

using models::SupervisedKind;
using models::UnsupervisedKind;
using nlohmann::json;

namespace {

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SyntheticBenchmark MakeSyntheticBenchmark(const SyntheticBenchmarkSpec& spec) {
  if (spec.rows < 2 || spec.dims < 1) {
    throw Error(ErrorCode::kInvalidArgument, "benchmark needs rows >= 2 and dims >= 1");
  }
  if (!(spec.outlier_fraction >= 0.0 && spec.outlier_fraction < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "outlier_fraction must be in [0, 0.5)");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(spec.mean, spec.stddev);
  std::uniform_real_distribution<double> shift(spec.shift_min, spec.shift_max);

  const auto outliers = static_cast<std::size_t>(
      std::llround(spec.outlier_fraction * static_cast<double>(spec.rows)));
  std::vector<std::size_t> order(spec.rows);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> truth(spec.rows, false);
  for (std::size_t k = 0; k < outliers; ++k) truth[order[k]] = true;

  std::vector<double> values(spec.rows * spec.dims);
  for (std::size_t i = 0; i < spec.rows; ++i) {
    for (std::size_t j = 0; j < spec.dims; ++j) {
      double v = noise(rng);
      if (truth[i]) v -= shift(rng) * spec.stddev;
      values[i * spec.dims + j] = v;
    }
  }
  return {models::FeatureMatrix(spec.rows, spec.dims, std::move(values)), std::move(truth)};
}

SearchSpace DefaultSearchSpace(UnsupervisedKind kind) {
  SearchSpace space;
  switch (kind) {
    case UnsupervisedKind::kIsolationForest:
      space.Integer("n_estimators", 250, 350)
          .Float("max_samples", 0.9, 1.0)
          .Float("max_features", 0.6, 0.9)
          .Categorical("bootstrap", {true})
          .Categorical("contamination", {0.01, 0.02, 0.05, 0.1});
      break;
    case UnsupervisedKind::kDbscan:
      space.Float("eps", 1.5, 2.0)
          .Integer("min_samples", 1, 8)
          .Categorical("metric", {"euclidean"});
      break;
    case UnsupervisedKind::kOcsvm:
      space.Categorical("kernel", {"linear"}).Float("nu", 0.005, 0.5, true);
      break;
  }
  return space;
}

SearchSpace DefaultSearchSpace(SupervisedKind kind) {
  SearchSpace space;
  switch (kind) {
    case SupervisedKind::kDecisionTree:
      space.Categorical("criterion", {"entropy", "gini"})
          .Categorical("splitter", {"best", "random"})
          .Integer("max_depth", 5, 35);
      break;
    case SupervisedKind::kLogisticRegression:
      space.Categorical("penalty", {"l1", "l2"}).Float("C", 0.01, 100.0, true);
      break;
    case SupervisedKind::kSvm:
      space.Categorical("kernel", {"rbf"}).Float("C", 0.4, 0.85).Float("gamma", 0.01, 4.5, true);
      break;
  }
  return space;
}

models::UnsupervisedConfig UnsupervisedFromParams(UnsupervisedKind kind, const json& params,
                                                  std::uint64_t seed) {
  models::UnsupervisedConfig config;
  config.kind = kind;
  config.iforest.rng_seed = seed;
  config.ocsvm.rng_seed = seed;
  switch (kind) {
    case UnsupervisedKind::kIsolationForest: ApplyParams(params, config.iforest); break;
    case UnsupervisedKind::kDbscan: ApplyParams(params, config.dbscan); break;
    case UnsupervisedKind::kOcsvm: ApplyParams(params, config.ocsvm); break;
  }
  return config;
}

models::SupervisedConfig SupervisedFromParams(SupervisedKind kind, const json& params,
                                              std::uint64_t seed) {
  models::SupervisedConfig config;
  config.kind = kind;
  config.dtree.rng_seed = seed;
  config.svm.rng_seed = seed;
  switch (kind) {
    case SupervisedKind::kDecisionTree: ApplyParams(params, config.dtree); break;
    case SupervisedKind::kLogisticRegression: ApplyParams(params, config.logreg); break;
    case SupervisedKind::kSvm: ApplyParams(params, config.svm); break;
  }
  return config;
}

Objective UnsupervisedObjective(const models::FeatureMatrix& x, UnsupervisedKind kind,
                                std::uint64_t seed, SilhouetteMode mode) {
  return [&x, kind, seed, mode](const json& params) {
    const auto config = UnsupervisedFromParams(kind, params, seed);
    const auto start = std::chrono::steady_clock::now();
    const auto labeling = models::RunLabeler(x, config);
    TrialOutcome outcome;
    outcome.fit_time_s = SecondsSince(start);
    outcome.objective = SilhouetteScore(x, labeling, mode);
    return outcome;
  };
}

SupervisedEvaluation EvaluateSupervised(const models::LabeledDataset& data,
                                        const models::SupervisedConfig& config,
                                        double test_fraction, std::uint64_t split_seed) {
  const auto split = models::StratifiedSplit(data, test_fraction, split_seed);
  const auto standardizer = models::Standardizer::Fit(split.train.x);
  const models::LabeledDataset train{standardizer.Transform(split.train.x), split.train.y};
  const auto test_x = standardizer.Transform(split.test.x);

  SupervisedEvaluation eval;
  auto start = std::chrono::steady_clock::now();
  const auto classifier = models::Classifier::Fit(train, config);
  eval.fit_time_s = SecondsSince(start);
  start = std::chrono::steady_clock::now();
  const auto predicted = classifier.PredictLabel(test_x, 0.5);
  eval.predict_time_s = SecondsSince(start);
  eval.counts = Confusion(split.test.y, predicted);
  const auto f1 = F1Score(eval.counts);
  eval.f1 = f1.value;
  eval.f1_undefined = f1.undefined;
  return eval;
}

Objective SupervisedObjective(const models::LabeledDataset& data, SupervisedKind kind,
                              std::uint64_t seed, double test_fraction) {
  return [&data, kind, seed, test_fraction](const json& params) {
    const auto config = SupervisedFromParams(kind, params, seed);
    const auto eval = EvaluateSupervised(data, config, test_fraction, seed);
    return TrialOutcome{eval.f1, eval.fit_time_s, eval.predict_time_s};
  };
}

namespace {

std::vector<std::string> SplitLine(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delimiter)) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == delimiter) fields.emplace_back();
  return fields;
}

}  // namespace

FeatureTable ReadFeatureTable(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open data file " + path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = SplitLine(line, delimiter);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::kParseError, path + ": missing header row");
  std::optional<std::size_t> label_col;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") label_col = c;
    else names.push_back(header[c]);
  }
  if (names.empty()) throw Error(ErrorCode::kParseError, path + ": no feature columns");

  std::vector<double> values;
  std::vector<bool> labels;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = SplitLine(line, delimiter);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParseError, path + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " fields");
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (label_col && c == *label_col) {
        const auto& f = fields[c];
        if (f == "1" || f == "true") labels.push_back(true);
        else if (f == "0" || f == "false") labels.push_back(false);
        else
          throw Error(ErrorCode::kParseError,
                      path + ":" + std::to_string(line_no) + ": bad label '" + f + "'");
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[c], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != fields[c].size() || !std::isfinite(v)) {
        throw Error(ErrorCode::kParseError, path + ":" + std::to_string(line_no) +
                                                ": bad number '" + fields[c] + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::kParseError, path + ": no data rows");
  FeatureTable table{models::FeatureMatrix(rows, names.size(), std::move(values), names), {}};
  if (label_col) table.labels = std::move(labels);
  return table;
}

void WriteFeatureTable(const std::string& path, const models::FeatureMatrix& x,
                       const std::vector<bool>* labels, char delimiter) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kNotFound, "cannot write " + path);
  const auto& names = x.feature_names();
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? std::string(1, delimiter) : "") << names[j];
  if (labels) out << delimiter << "label";
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (j) out << delimiter;
      out << x(i, j);
    }
    if (labels) out << delimiter << ((*labels)[i] ? 1 : 0);
    out << '\n';
  }
}

TunedLabeling LabelWithTunedForest(const models::FeatureMatrix& x, int trials,
                                   std::uint64_t seed) {
  const auto kind = models::UnsupervisedKind::kIsolationForest;
  TunedLabeling out;
  out.search = RandomSearch(DefaultSearchSpace(kind), UnsupervisedObjective(x, kind, seed),
                            trials, seed);
  out.best_params = out.search.best_trial().params;
  out.labeling = models::RunLabeler(x, UnsupervisedFromParams(kind, out.best_params, seed));
  return out;
}

}  // namespace sentinel::tuning
