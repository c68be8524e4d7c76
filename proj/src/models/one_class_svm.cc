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

#include "sentinel/models/one_class_svm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sentinel/core/error.h"

namespace sentinel::models {

namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum;
}

// Index of the ceil(nu n)-th smallest projection.
std::size_t RhoIndex(const std::vector<double>& projections, double nu,
                     std::vector<std::size_t>& order) {
  const std::size_t n = projections.size();
  auto k = static_cast<std::size_t>(std::ceil(nu * static_cast<double>(n) - 1e-12));
  k = std::clamp<std::size_t>(k, 1, n);
  order.resize(n);
  std::iota(order.begin(), order.end(), 0);
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   order.end(), [&](std::size_t a, std::size_t b) {
                     return projections[a] < projections[b] ||
                            (projections[a] == projections[b] && a < b);
                   });
  return order[k - 1];
}

}  // namespace

void OcsvmParams::Validate() const {
  if (!(nu > 0.0 && nu <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "nu must be in (0, 1]");
  }
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  }
  if (epochs < 1) throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
}

double OneClassSvm::Objective(const FeatureMatrix& x, std::span<const double> w,
                              double rho, double nu) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    hinge += std::max(0.0, rho - Dot(w, x.row(i)));
  }
  return 0.5 * Dot(w, w) - rho + hinge / (nu * static_cast<double>(x.rows()));
}

OneClassSvm OneClassSvm::Fit(const FeatureMatrix& x,
                             const OcsvmParams& params) {
  params.Validate();
  if (x.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "one-class SVM needs n >= 2");
  }
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const double nu_n = params.nu * static_cast<double>(n);

  // nu = 1 optimum: the data mean.
  std::vector<double> w(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) w[j] += x(i, j) / static_cast<double>(n);
  }

  std::vector<double> projections(n);
  std::vector<std::size_t> order;
  std::vector<double> gradient(d);

  auto rho_for = [&](const std::vector<double>& weights, std::size_t* pivot) {
    for (std::size_t i = 0; i < n; ++i) projections[i] = Dot(weights, x.row(i));
    *pivot = RhoIndex(projections, params.nu, order);
    return projections[*pivot];
  };

  OneClassSvm best;
  double best_objective = std::numeric_limits<double>::infinity();
  double previous = best_objective;
  int stable = 0;
  OneClassSvm model;
  for (int t = 0; t < params.epochs; ++t) {
    std::size_t pivot = 0;
    const double rho = rho_for(w, &pivot);
    const double objective = Objective(x, w, rho, params.nu);
    if (objective < best_objective) {
      best_objective = objective;
      best.w_ = w;
      best.rho_ = rho;
    }
    model.iterations_ = t + 1;
    if (std::abs(previous - objective) <=
        params.tolerance * std::max(1.0, std::abs(objective))) {
      if (++stable >= 10) {
        best.converged_ = true;
        break;
      }
    } else {
      stable = 0;
    }
    previous = objective;

    // Subgradient in w with rho at its exact minimiser.
    std::fill(gradient.begin(), gradient.end(), 0.0);
    double active = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (projections[i] < rho) {
        for (std::size_t j = 0; j < d; ++j) gradient[j] += x(i, j);
        active += 1.0;
      }
    }
    const double pivot_weight = std::max(0.0, nu_n - active);
    double norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      gradient[j] = w[j] - (gradient[j] + pivot_weight * x(pivot, j)) / nu_n;
      norm += gradient[j] * gradient[j];
    }
    if (norm < 1e-24) {
      best.converged_ = true;
      break;
    }
    const double step =
        params.learning_rate / (1.0 + params.learning_rate * t);
    for (std::size_t j = 0; j < d; ++j) w[j] -= step * gradient[j];
  }
  best.iterations_ = model.iterations_;
  // Recheck rho for the retained iterate so the nu-property holds exactly.
  std::size_t pivot = 0;
  best.rho_ = rho_for(best.w_, &pivot);
  return best;
}

double OneClassSvm::Decision(std::span<const double> row) const {
  if (row.size() != w_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(w_.size()) + " features");
  }
  return Dot(w_, row) - rho_;
}

AnomalyLabeling OneClassSvm::Label(const FeatureMatrix& x) const {
  AnomalyLabeling result;
  result.labels.resize(x.rows());
  result.raw_scores.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double f = Decision(x.row(i));
    result.labels[i] = f < 0.0;
    result.raw_scores[i] = -f;
  }
  result.converged = converged_;
  return result;
}

}  // namespace sentinel::models
