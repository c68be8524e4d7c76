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


#ifndef SENTINEL_PIPELINE_OUTLIERS_H_
#define SENTINEL_PIPELINE_OUTLIERS_H_

#include <cstdint>
#include <vector>

#include "sentinel/models/labeled_dataset.h"
#include "sentinel/pipeline/config.h"

namespace sentinel::pipeline {

struct InjectionResult {
  models::LabeledDataset data;  // originals first, then the synthetic rows
  std::vector<std::size_t> sources;  // source row of each synthetic row
};

// Copies max(min_count, ceil(fraction * n)) distinct rows drawn uniformly,
// shifts every feature of each copy by sigma_shift * stddev of that feature
// with an independent random sign, and appends the copies as anomalous.
// Constant features are left unshifted. Throws kTooFewRows when n < min_count.
InjectionResult InjectSyntheticOutliers(const models::FeatureMatrix& x,
                                        const std::vector<bool>& labels,
                                        const OutlierInjectionConfig& config,
                                        std::uint64_t seed);

}  // namespace sentinel::pipeline

#endif  // SENTINEL_PIPELINE_OUTLIERS_H_
