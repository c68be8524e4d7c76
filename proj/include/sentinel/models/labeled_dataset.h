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

#ifndef SENTINEL_MODELS_LABELED_DATASET_H_
#define SENTINEL_MODELS_LABELED_DATASET_H_

#include <cstdint>
#include <vector>

#include "sentinel/models/feature_matrix.h"

namespace sentinel::models {

struct LabeledDataset {
  FeatureMatrix x;
  std::vector<bool> y;  // true = anomalous

  std::size_t positives() const;
  // Throws kInvalidArgument on |y| != n and kSingleClass when y is constant.
  void RequireBothClasses() const;
};

struct TrainTestSplit {
  LabeledDataset train;
  LabeledDataset test;
};

// Seeded stratified split: round(test_fraction * class size) rows of each
// class go to the test side, at least one per class when the class has two
// or more rows.
TrainTestSplit StratifiedSplit(const LabeledDataset& data, double test_fraction,
                               std::uint64_t seed);

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_LABELED_DATASET_H_
