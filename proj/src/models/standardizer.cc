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


#include "sentinel/models/standardizer.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sentinel/core/error.h"

namespace sentinel::models {

Standardizer Standardizer::Fit(const FeatureMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += x(i, j);
  }
  for (double& m : mean) m /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double e = x(i, j) - mean[j];
      var[j] += e * e;
    }
  }
  std::vector<double> sd(d);
  for (std::size_t j = 0; j < d; ++j) sd[j] = std::sqrt(var[j] / static_cast<double>(n));
  return Standardizer(std::move(mean), std::move(sd));
}

Standardizer::Standardizer(std::vector<double> means, std::vector<double> stddevs)
    : means_(std::move(means)), stddevs_(std::move(stddevs)) {
  if (means_.size() != stddevs_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "means and stddevs differ in length");
  }
  constant_.assign(stddevs_.size(), false);
  for (std::size_t j = 0; j < stddevs_.size(); ++j) {
    // Relative guard: a column of identical large values can leave rounding
    // noise in the variance.
    if (!(stddevs_[j] > 1e-12 * std::max(1.0, std::abs(means_[j])))) {
      stddevs_[j] = 1.0;
      constant_[j] = true;
    }
  }
}

std::vector<double> Standardizer::Transform(std::span<const double> row) const {
  if (row.size() != means_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(means_.size()) + " features");
  }
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = (row[j] - means_[j]) / stddevs_[j];
  }
  return out;
}

FeatureMatrix Standardizer::Transform(const FeatureMatrix& x) const {
  std::vector<double> values;
  values.reserve(x.rows() * x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = Transform(x.row(i));
    values.insert(values.end(), row.begin(), row.end());
  }
  return FeatureMatrix(x.rows(), x.cols(), std::move(values), x.feature_names());
}

nlohmann::json Standardizer::ToJson() const {
  // Constant features are stored with stddev 0 so the guard is re-applied
  // on load.
  std::vector<double> sd = stddevs_;
  for (std::size_t j = 0; j < sd.size(); ++j) {
    if (constant_[j]) sd[j] = 0.0;
  }
  return {{"mean", means_}, {"stddev", sd}};
}

Standardizer Standardizer::FromJson(const nlohmann::json& doc) {
  return Standardizer(doc.at("mean").get<std::vector<double>>(),
                      doc.at("stddev").get<std::vector<double>>());
}

}  // namespace sentinel::models
