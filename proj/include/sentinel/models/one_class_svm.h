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

// Linear nu one-class SVM in the primal:
//
//   min_{w, rho}  1/2 |w|^2 - rho + 1/(nu n) sum_i max(0, rho - <w, x_i>)
//
// For fixed w the optimal rho is the ceil(nu n)-th smallest projection, so
// each iteration sets rho exactly and takes a subgradient step in w. With
// rho chosen that way fewer than nu n training rows fall strictly below the
// boundary, which is the nu-property.
//
// The boundary separates the data from the origin, so inputs should be
// scaled but not centred on the origin.

#ifndef SENTINEL_MODELS_ONE_CLASS_SVM_H_
#define SENTINEL_MODELS_ONE_CLASS_SVM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sentinel/models/feature_matrix.h"

namespace sentinel::models {

enum class OcsvmKernel { kLinear };

struct OcsvmParams {
  OcsvmKernel kernel = OcsvmKernel::kLinear;
  double nu = 0.05;  // (0, 1]
  double learning_rate = 0.5;
  int epochs = 500;
  double tolerance = 1e-9;  // relative objective change that counts as converged
  std::uint64_t rng_seed = 0;

  void Validate() const;
};

class OneClassSvm {
 public:
  // Never throws on non-convergence; check converged().
  static OneClassSvm Fit(const FeatureMatrix& x, const OcsvmParams& params);

  // <w, x> - rho; negative is outside the boundary.
  double Decision(std::span<const double> row) const;
  AnomalyLabeling Label(const FeatureMatrix& x) const;

  // Primal objective at (w, rho) on `x`.
  static double Objective(const FeatureMatrix& x, std::span<const double> w,
                          double rho, double nu);

  const std::vector<double>& weights() const { return w_; }
  double rho() const { return rho_; }
  bool converged() const { return converged_; }
  int iterations() const { return iterations_; }

 private:
  std::vector<double> w_;
  double rho_ = 0.0;
  bool converged_ = false;
  int iterations_ = 0;
};

}  // namespace sentinel::models

#endif  // SENTINEL_MODELS_ONE_CLASS_SVM_H_
