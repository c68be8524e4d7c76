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

// Regularised logistic regression,
//
//   J(w, b) = sum_i log(1 + exp(-y_i (w.x_i + b))) + (1/C) R(w),   y in {-1, 1}
//
// with R = |w|_1 or 1/2 |w|^2 and an unpenalised intercept, so larger C means
// weaker regularisation. l2 is minimised with accelerated gradient steps and
// l1 with accelerated proximal (soft-threshold) steps; both stop when the
// gradient mapping norm falls below the tolerance.

#ifndef SENTINEL_MODELS_LOGISTIC_REGRESSION_H_
#define SENTINEL_MODELS_LOGISTIC_REGRESSION_H_

#include <span>
#include <vector>

#include "json.hpp"
#include "sentinel/models/labeled_dataset.h"

namespace sentinel::models {

enum class Penalty { kL1, kL2 };

struct LogRegParams {
  Penalty penalty = Penalty::kL1;
  double c = 1.0;
  int max_iterations = 5000;
  double tolerance = 1e-6;

  void Validate() const;
};

double Sigmoid(double z);

// Objective and gradient of the smooth part (loss, plus the l2 term when the
// penalty is l2). The l1 term is handled by the proximal step only.
double LogisticSmoothObjective(const LabeledDataset& data,
                               std::span<const double> w, double b,
                               const LogRegParams& params);
void LogisticSmoothGradient(const LabeledDataset& data,
                            std::span<const double> w, double b,
                            const LogRegParams& params,
                            std::vector<double>& grad_w, double& grad_b);
// Full objective including the l1 term.
double LogisticObjective(const LabeledDataset& data, std::span<const double> w,
                         double b, const LogRegParams& params);

class LogisticRegression {
 public:
  static LogisticRegression Fit(const LabeledDataset& data,
                                const LogRegParams& params);
  static LogisticRegression FromWeights(std::vector<double> w, double b);

  double PredictProba(std::span<const double> row) const;
  std::vector<double> PredictProba(const FeatureMatrix& x) const;

  const std::vector<double>& weights() const { return w_; }
  double intercept() const { return b_; }
  bool converged() const { return converged_; }
  int iterations() const { return iterations_; }
  const LogRegParams& params() const { return params_; }

  nlohmann::json ToJson() const;
  static LogisticRegression FromJson(const nlohmann::json& doc);

 private:
  LogRegParams params_;
  std::vector<double> w_;
  double b_ = 0.0;
  bool converged_ = false;
  int iterations_ = 0;
};

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_LOGISTIC_REGRESSION_H_
