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

#include "sentinel/models/feature_matrix.h"

#include <algorithm>
#include <cmath>

#include "sentinel/core/error.h"

namespace sentinel::models {

FeatureMatrix::FeatureMatrix(std::vector<std::vector<double>> rows,
                             std::vector<std::string> feature_names)
    : names_(std::move(feature_names)) {
  rows_ = rows.size();
  cols_ = rows.empty() ? 0 : rows.front().size();
  values_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw Error(ErrorCode::kInvalidArgument, "ragged feature rows");
    }
    values_.insert(values_.end(), row.begin(), row.end());
  }
  Validate();
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols,
                             std::vector<double> values,
                             std::vector<std::string> feature_names)
    : rows_(rows),
      cols_(cols),
      values_(std::move(values)),
      names_(std::move(feature_names)) {
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kInvalidArgument, "value count != rows * cols");
  }
  Validate();
}

void FeatureMatrix::Validate() {
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "feature matrix must be non-empty");
  }
  if (!std::all_of(values_.begin(), values_.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite feature value");
  }
  if (names_.empty()) {
    for (std::size_t j = 0; j < cols_; ++j) names_.push_back("f" + std::to_string(j));
  } else if (names_.size() != cols_) {
    throw Error(ErrorCode::kInvalidArgument, "feature name count != cols");
  }
}

FeatureMatrix FeatureMatrix::SelectRows(
    std::span<const std::size_t> indices) const {
  std::vector<double> values;
  values.reserve(indices.size() * cols_);
  for (std::size_t i : indices) {
    auto r = row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  return FeatureMatrix(indices.size(), cols_, std::move(values), names_);
}

std::vector<double> FeatureMatrix::Column(std::size_t j) const {
  std::vector<double> column(rows_);
  for (std::size_t i = 0; i < rows_; ++i) column[i] = (*this)(i, j);
  return column;
}

std::size_t AnomalyLabeling::anomaly_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return sum;
}

double Distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(SquaredDistance(a, b));
}

}  // namespace sentinel::models
