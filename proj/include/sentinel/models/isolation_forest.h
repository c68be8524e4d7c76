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

// Isolation Forest.
//
// Each tree is grown on a subsample of psi rows by recursively picking a
// feature from the tree's random feature subset and a split point drawn
// uniformly inside that feature's range at the node. Growth stops at depth
// ceil(log2 psi) or when a node cannot be split. The anomaly score of x is
//
//   s(x) = 2^(-E[h(x)] / c(psi))
//
// where h(x) is the depth reached plus c(leaf size), the expected path length
// of an unsuccessful BST search over the rows left unseparated at the leaf.

#ifndef SENTINEL_MODELS_ISOLATION_FOREST_H_
#define SENTINEL_MODELS_ISOLATION_FOREST_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sentinel/models/feature_matrix.h"

namespace sentinel::models {

struct IsolationForestParams {
  int n_estimators = 300;
  // Values <= 1 are a fraction of the rows, larger values an absolute count.
  double max_samples = 1.0;
  double max_features = 1.0;  // fraction in (0, 1]
  bool bootstrap = true;
  double contamination = 0.01;  // (0, 0.5]
  std::uint64_t rng_seed = 0;

  void Validate() const;
};

// Harmonic number, exact for k <= 20 and ln(k) + gamma above.
double HarmonicNumber(double k);
// Average path length of an unsuccessful BST search over m items.
double AveragePathLength(double m);
// 2^(-mean_path / c(psi)).
double ScoreFromPathLength(double mean_path, double psi);

class IsolationForest {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int size = 0;  // rows reaching the leaf
  };
  using Tree = std::vector<Node>;

  static IsolationForest Fit(const FeatureMatrix& x,
                             const IsolationForestParams& params);

  // Scores in (0, 1); higher is more anomalous. Throws kDimensionMismatch.
  std::vector<double> Score(const FeatureMatrix& x) const;
  double Score(std::span<const double> row) const;
  double PathLength(std::span<const double> row) const;

  // Threshold at the (1 - contamination) quantile of the scores of `x`;
  // rows strictly above it are anomalous.
  AnomalyLabeling Label(const FeatureMatrix& x, double contamination) const;
  AnomalyLabeling Label(const FeatureMatrix& x) const {
    return Label(x, params_.contamination);
  }

  const std::vector<Tree>& trees() const { return trees_; }
  std::size_t psi() const { return psi_; }
  std::size_t dims() const { return dims_; }
  bool degenerate() const { return degenerate_; }
  const IsolationForestParams& params() const { return params_; }

 private:
  IsolationForestParams params_;
  std::vector<Tree> trees_;
  std::size_t psi_ = 0;
  std::size_t dims_ = 0;
  bool degenerate_ = false;
};

// Linear-interpolated quantile (q in [0, 1]) of `values`.
double Quantile(std::vector<double> values, double q);

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_ISOLATION_FOREST_H_
