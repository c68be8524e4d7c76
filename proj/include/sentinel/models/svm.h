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

// Soft-margin SVM trained in the dual with Platt's SMO,
//
//   max_a  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
//   s.t.   0 <= a_i <= C,  sum_i a_i y_i = 0,
//
// and Platt-scaled probabilities fitted on a held-out calibration split.

#ifndef SENTINEL_MODELS_SVM_H_
#define SENTINEL_MODELS_SVM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "sentinel/models/labeled_dataset.h"

namespace sentinel::models {

enum class SvmKernel { kLinear, kRbf };

struct SvmParams {
  SvmKernel kernel = SvmKernel::kRbf;
  double c = 0.6;
  double gamma = 0.1;  // rbf only
  double smo_tolerance = 1e-3;
  int max_passes = 2;  // consecutive violation-free full sweeps
  int max_iterations = 200000;  // pair updates before giving up
  double calibration_fraction = 0.2;
  std::uint64_t rng_seed = 0;

  void Validate() const;
};

double Kernel(const SvmParams& params, std::span<const double> a,
              std::span<const double> b);

// Kernel expansion f(x) = sum_i alpha_i y_i K(sv_i, x) + b over the support
// vectors only.
class SvmDecision {
 public:
  // Solves the dual on `data` (labels true -> +1).
  static SvmDecision Train(const LabeledDataset& data, const SvmParams& params);

  double Decision(std::span<const double> row) const;

  const std::vector<std::vector<double>>& support_vectors() const { return sv_; }
  // alpha_i * y_i for each support vector.
  const std::vector<double>& coefficients() const { return coef_; }
  double bias() const { return bias_; }
  bool converged() const { return converged_; }
  // Dual objective and the largest KKT residual on the training rows.
  double dual_objective() const { return dual_objective_; }
  double max_kkt_violation() const { return max_kkt_violation_; }
  // Full multiplier vector over the training rows.
  const std::vector<double>& alphas() const { return alphas_; }
  const SvmParams& params() const { return params_; }

  nlohmann::json ToJson() const;
  static SvmDecision FromJson(const nlohmann::json& doc);

 private:
  SvmParams params_;
  std::vector<std::vector<double>> sv_;
  std::vector<double> coef_;
  std::vector<double> alphas_;
  double bias_ = 0.0;
  bool converged_ = false;
  double dual_objective_ = 0.0;
  double max_kkt_violation_ = 0.0;
};

// Dual objective of `alpha` for the kernel matrix built from `data`.
double SvmDualObjective(const LabeledDataset& data, const SvmParams& params,
                        std::span<const double> alpha);

// P(y = 1 | f) = 1 / (1 + exp(a f + b)).
struct PlattSigmoid {
  double a = -1.0;
  double b = 0.0;

  double operator()(double decision) const;
  // Newton fit with Platt's target smoothing (Lin, Lin and Weng).
  static PlattSigmoid Fit(std::span<const double> decisions,
                          const std::vector<bool>& labels);
};

class SvmClassifier {
 public:
  // Trains on the stratified (1 - calibration_fraction) part and calibrates on
  // the rest. When the calibration split cannot hold both classes the whole
  // set is used for training and the fixed sigmoid slope is kept
  // (calibration_degenerate() is then true).
  static SvmClassifier Fit(const LabeledDataset& data, const SvmParams& params);

  double PredictProba(std::span<const double> row) const;
  std::vector<double> PredictProba(const FeatureMatrix& x) const;
  double Decision(std::span<const double> row) const {
    return decision_.Decision(row);
  }

  const SvmDecision& decision() const { return decision_; }
  const PlattSigmoid& sigmoid() const { return sigmoid_; }
  bool calibration_degenerate() const { return calibration_degenerate_; }
  std::size_t dims() const { return dims_; }

  nlohmann::json ToJson() const;
  static SvmClassifier FromJson(const nlohmann::json& doc);

 private:
  SvmDecision decision_;
  PlattSigmoid sigmoid_;
  bool calibration_degenerate_ = false;
  std::size_t dims_ = 0;
};

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_SVM_H_
