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


#ifndef SENTINEL_TUNING_METRICS_H_
#define SENTINEL_TUNING_METRICS_H_

#include <cstddef>
#include <vector>

#include "sentinel/models/feature_matrix.h"

namespace sentinel::tuning {

// Mean over samples of (b - a) / max(a, b), where a is the mean distance to
// the other members of the sample's group and b the smallest mean distance
// to another group. Members of singleton groups contribute 0. Throws
// kDegenerateGrouping when n < 3 or fewer than two groups are present, and
// kDimensionMismatch when |assignment| != n.
double SilhouetteScore(const models::FeatureMatrix& x, const std::vector<int>& assignment);

enum class SilhouetteMode {
  kBinary,      // normal vs anomalous
  kPerCluster,  // DBSCAN clusters, noise forming one more group
};

double SilhouetteScore(const models::FeatureMatrix& x,
                       const models::AnomalyLabeling& labeling,
                       SilhouetteMode mode = SilhouetteMode::kBinary);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

ConfusionCounts Confusion(const std::vector<bool>& truth, const std::vector<bool>& predicted);

struct F1Result {
  double value = 0.0;
  bool undefined = false;  // tp + fp + fn == 0; value is then 0
};

// tp / (tp + (fp + fn) / 2).
F1Result F1Score(const ConfusionCounts& counts);

}  // namespace sentinel::tuning

#endif  // SENTINEL_TUNING_METRICS_H_
