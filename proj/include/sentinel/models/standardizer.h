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


#ifndef SENTINEL_MODELS_STANDARDIZER_H_
#define SENTINEL_MODELS_STANDARDIZER_H_

#include <span>
#include <vector>

#include "json.hpp"
#include "sentinel/models/feature_matrix.h"

namespace sentinel::models {

// Per-feature (x - mean) / stddev with population statistics. A feature with
// zero variance gets stddev 1, so it is only centred.
class Standardizer {
 public:
  static Standardizer Fit(const FeatureMatrix& x);
  Standardizer(std::vector<double> means, std::vector<double> stddevs);
  Standardizer() = default;

  FeatureMatrix Transform(const FeatureMatrix& x) const;
  std::vector<double> Transform(std::span<const double> row) const;

  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& stddevs() const { return stddevs_; }
  // True for features whose fitted variance was zero.
  const std::vector<bool>& constant() const { return constant_; }

  nlohmann::json ToJson() const;
  static Standardizer FromJson(const nlohmann::json& doc);

 private:
  std::vector<double> means_;
  std::vector<double> stddevs_;
  std::vector<bool> constant_;
};

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_STANDARDIZER_H_
