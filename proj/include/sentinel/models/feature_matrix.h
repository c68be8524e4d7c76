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

#ifndef SENTINEL_MODELS_FEATURE_MATRIX_H_
#define SENTINEL_MODELS_FEATURE_MATRIX_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sentinel::models {

// Dense row-major n x d matrix of finite values.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  // Throws kInvalidArgument on n == 0, d == 0, ragged rows or non-finite
  // entries. Missing names default to f0..f{d-1}.
  FeatureMatrix(std::vector<std::vector<double>> rows,
                std::vector<std::string> feature_names = {});
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                std::vector<std::string> feature_names = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& feature_names() const { return names_; }

  FeatureMatrix SelectRows(std::span<const std::size_t> indices) const;
  std::vector<double> Column(std::size_t j) const;

 private:
  void Validate();

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> names_;
};

// Result of an unsupervised labeler. Higher raw scores are more anomalous.
struct AnomalyLabeling {
  std::vector<bool> labels;  // true = anomalous
  std::vector<double> raw_scores;
  // DBSCAN only: cluster id per row, -1 for noise.
  std::vector<int> clusters;
  bool degenerate = false;
  bool converged = true;

  std::size_t anomaly_count() const;
};

double SquaredDistance(std::span<const double> a, std::span<const double> b);
double Distance(std::span<const double> a, std::span<const double> b);

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_FEATURE_MATRIX_H_
