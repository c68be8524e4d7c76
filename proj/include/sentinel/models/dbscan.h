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

#ifndef SENTINEL_MODELS_DBSCAN_H_
#define SENTINEL_MODELS_DBSCAN_H_

#include "sentinel/models/feature_matrix.h"

namespace sentinel::models {

enum class DistanceMetric { kEuclidean };

struct DbscanParams {
  double eps = 1.75;
  int min_samples = 5;  // neighbourhood size including the point itself
  DistanceMetric metric = DistanceMetric::kEuclidean;

  void Validate() const;
};

// Brute-force DBSCAN. A point is core when at least min_samples points
// (itself included) lie within eps. Clusters are grown from core points in
// row order; a border point joins the first cluster that reaches it. Noise
// rows get cluster -1, label true and raw score 1.
AnomalyLabeling DbscanLabel(const FeatureMatrix& x, const DbscanParams& params);

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_DBSCAN_H_
