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

#ifndef SENTINEL_MODELS_DECISION_TREE_H_
#define SENTINEL_MODELS_DECISION_TREE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "sentinel/models/labeled_dataset.h"

namespace sentinel::models {

enum class SplitCriterion { kGini, kEntropy };
enum class Splitter { kBest, kRandom };

struct DecisionTreeParams {
  SplitCriterion criterion = SplitCriterion::kEntropy;
  Splitter splitter = Splitter::kBest;
  int max_depth = 35;
  double max_features = 1.0;  // fraction of features tried per node
  int min_samples_leaf = 1;
  int min_samples_split = 2;
  std::uint64_t rng_seed = 0;

  void Validate() const;
};

// Impurity of a node with the given anomalous fraction. Entropy in bits.
double Impurity(SplitCriterion criterion, double positive_fraction);

// Binary CART. Leaves predict the anomalous fraction of their training rows.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // rows with x[feature] <= threshold go left
    int left = -1;
    int right = -1;
    int samples = 0;
    int positives = 0;
    double impurity = 0.0;

    double probability() const {
      return samples == 0 ? 0.0 : static_cast<double>(positives) / samples;
    }
  };

  // Throws kSingleClass when y is constant.
  static DecisionTree Fit(const LabeledDataset& data,
                          const DecisionTreeParams& params);

  double PredictProba(std::span<const double> row) const;
  std::vector<double> PredictProba(const FeatureMatrix& x) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  int depth() const;
  std::size_t dims() const { return dims_; }
  const DecisionTreeParams& params() const { return params_; }

  nlohmann::json ToJson() const;
  static DecisionTree FromJson(const nlohmann::json& doc);

 private:
  DecisionTreeParams params_;
  std::vector<Node> nodes_;
  std::size_t dims_ = 0;
};

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_DECISION_TREE_H_
