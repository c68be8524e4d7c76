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


// Synthetic benchmark data, default search spaces and the tuning objectives
// for each model family.

#ifndef SENTINEL_TUNING_BENCHMARK_H_
#define SENTINEL_TUNING_BENCHMARK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/models/classifier.h"
#include "sentinel/tuning/metrics.h"
#include "sentinel/tuning/random_search.h"

namespace sentinel::tuning {

// Gaussian baseline with a small fraction of rows pushed away from it. Every
// feature of an outlier is shifted by a uniform draw in [shift_min,
// shift_max] standard deviations towards lower values, so outliers are
// scattered rather than forming a second dense blob.
struct SyntheticBenchmarkSpec {
  std::size_t rows = 1000;
  std::size_t dims = 4;
  double outlier_fraction = 0.02;
  double mean = 10.0;
  double stddev = 1.0;
  double shift_min = 6.0;
  double shift_max = 10.0;
  std::uint64_t seed = 0;
};

struct SyntheticBenchmark {
  models::FeatureMatrix x;
  std::vector<bool> truth;  // generated outliers
};

SyntheticBenchmark MakeSyntheticBenchmark(const SyntheticBenchmarkSpec& spec);

SearchSpace DefaultSearchSpace(models::UnsupervisedKind kind);
SearchSpace DefaultSearchSpace(models::SupervisedKind kind);

// Silhouette of the labeler's partition; params are overlaid on defaults and
// the model seed comes from `seed`. Single-group partitions fail the trial.
Objective UnsupervisedObjective(const models::FeatureMatrix& x,
                                models::UnsupervisedKind kind, std::uint64_t seed,
                                SilhouetteMode mode = SilhouetteMode::kBinary);

// Test-set F1 on a stratified split: standardise on the train part, fit,
// label the test part with threshold 0.5.
struct SupervisedEvaluation {
  double f1 = 0.0;
  bool f1_undefined = false;
  ConfusionCounts counts;
  double fit_time_s = 0.0;
  double predict_time_s = 0.0;
};

SupervisedEvaluation EvaluateSupervised(const models::LabeledDataset& data,
                                        const models::SupervisedConfig& config,
                                        double test_fraction, std::uint64_t split_seed);

Objective SupervisedObjective(const models::LabeledDataset& data,
                              models::SupervisedKind kind, std::uint64_t seed,
                              double test_fraction = 0.2);

models::UnsupervisedConfig UnsupervisedFromParams(models::UnsupervisedKind kind,
                                                  const nlohmann::json& params,
                                                  std::uint64_t seed);
models::SupervisedConfig SupervisedFromParams(models::SupervisedKind kind,
                                              const nlohmann::json& params,
                                              std::uint64_t seed);

// Labels `x` with the Isolation Forest whose partition has the best
// silhouette over `trials` random-search trials. Throws kEmptyTrials.
struct TunedLabeling {
  models::AnomalyLabeling labeling;
  SearchResult search;
  nlohmann::json best_params;
};
TunedLabeling LabelWithTunedForest(const models::FeatureMatrix& x, int trials,
                                   std::uint64_t seed);

// Delimiter-separated numeric table with a header row. A column named
// "label" (0/1 or true/false) is split off as labels. Throws kParseError
// with the line number, or kNotFound when the file cannot be opened.
struct FeatureTable {
  models::FeatureMatrix x;
  std::optional<std::vector<bool>> labels;
};

FeatureTable ReadFeatureTable(const std::string& path, char delimiter = ',');
void WriteFeatureTable(const std::string& path, const models::FeatureMatrix& x,
                       const std::vector<bool>* labels = nullptr, char delimiter = ',');

}  // namespace sentinel::tuning

#endif  // SENTINEL_TUNING_BENCHMARK_H_
