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

#include "sentinel/models/logistic_regression.h"

#include <algorithm>
#include <cmath>

#include "sentinel/core/error.h"

namespace sentinel::models {

namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Margin(const FeatureMatrix& x, std::size_t i, std::span<const double> w,
              double b) {
  double z = b;
  for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x(i, j);
  return z;
}

// Largest eigenvalue of [X 1]^T [X 1] by power iteration.
double GramNorm(const FeatureMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  std::vector<double> v(d + 1, 1.0 / std::sqrt(static_cast<double>(d + 1)));
  std::vector<double> av(n);
  std::vector<double> next(d + 1);
  double lambda = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      av[i] = Margin(x, i, std::span<const double>(v.data(), d), v[d]);
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) next[j] += x(i, j) * av[i];
      next[d] += av[i];
    }
    double norm = 0.0;
    for (double e : next) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    const double previous = lambda;
    lambda = norm;
    for (std::size_t j = 0; j <= d; ++j) v[j] = next[j] / norm;
    if (std::abs(lambda - previous) <= 1e-10 * lambda) break;
  }
  return lambda;
}

double SoftThreshold(double v, double tau) {
  if (v > tau) return v - tau;
  if (v < -tau) return v + tau;
  return 0.0;
}

}  // namespace

void LogRegParams::Validate() const {
  if (!(c > 0.0)) throw Error(ErrorCode::kInvalidArgument, "C must be > 0");
  if (max_iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  }
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be > 0");
  }
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LogisticSmoothObjective(const LabeledDataset& data,
                               std::span<const double> w, double b,
                               const LogRegParams& params) {
  double loss = 0.0;
  for (std::size_t i = 0; i < data.x.rows(); ++i) {
    const double y = data.y[i] ? 1.0 : -1.0;
    loss += Softplus(-y * Margin(data.x, i, w, b));
  }
  if (params.penalty == Penalty::kL2) {
    double sq = 0.0;
    for (double v : w) sq += v * v;
    loss += 0.5 * sq / params.c;
  }
  return loss;
}

void LogisticSmoothGradient(const LabeledDataset& data,
                            std::span<const double> w, double b,
                            const LogRegParams& params,
                            std::vector<double>& grad_w, double& grad_b) {
  const std::size_t d = w.size();
  grad_w.assign(d, 0.0);
  grad_b = 0.0;
  for (std::size_t i = 0; i < data.x.rows(); ++i) {
    const double y = data.y[i] ? 1.0 : 0.0;
    const double residual = Sigmoid(Margin(data.x, i, w, b)) - y;
    for (std::size_t j = 0; j < d; ++j) grad_w[j] += residual * data.x(i, j);
    grad_b += residual;
  }
  if (params.penalty == Penalty::kL2) {
    for (std::size_t j = 0; j < d; ++j) grad_w[j] += w[j] / params.c;
  }
}

double LogisticObjective(const LabeledDataset& data, std::span<const double> w,
                         double b, const LogRegParams& params) {
  double value = LogisticSmoothObjective(data, w, b, params);
  if (params.penalty == Penalty::kL1) {
    double l1 = 0.0;
    for (double v : w) l1 += std::abs(v);
    value += l1 / params.c;
  }
  return value;
}

LogisticRegression LogisticRegression::Fit(const LabeledDataset& data,
                                           const LogRegParams& params) {
  params.Validate();
  data.RequireBothClasses();
  const std::size_t d = data.x.cols();
  const double n = static_cast<double>(data.x.rows());

  double lipschitz = 0.25 * GramNorm(data.x) * 1.01;
  if (params.penalty == Penalty::kL2) lipschitz += 1.0 / params.c;
  const double step = 1.0 / std::max(lipschitz, 1e-12);
  const double l1_tau = params.penalty == Penalty::kL1 ? step / params.c : 0.0;

  // theta = (w, b); z is the extrapolated point.
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> zw = w;
  double zb = b;
  std::vector<double> gw;
  double gb = 0.0;
  std::vector<double> next_w(d);
  double momentum = 1.0;
  double objective = LogisticObjective(data, w, b, params);

  auto prox_step = [&](const std::vector<double>& from_w, double from_b,
                       std::vector<double>& out_w, double& out_b) {
    LogisticSmoothGradient(data, from_w, from_b, params, gw, gb);
    for (std::size_t j = 0; j < d; ++j) {
      out_w[j] = SoftThreshold(from_w[j] - step * gw[j], l1_tau);
    }
    out_b = from_b - step * gb;
  };

  LogisticRegression model;
  model.params_ = params;
  std::vector<double> probe_w(d);
  for (int iter = 1; iter <= params.max_iterations; ++iter) {
    double next_b = 0.0;
    prox_step(zw, zb, next_w, next_b);
    const double next_objective = LogisticObjective(data, next_w, next_b, params);
    const double next_momentum =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    if (next_objective > objective) {
      // Adaptive restart: drop momentum and retry from the current iterate.
      zw = w;
      zb = b;
      momentum = 1.0;
      model.iterations_ = iter;
      continue;
    }
    const double beta = (momentum - 1.0) / next_momentum;
    for (std::size_t j = 0; j < d; ++j) {
      zw[j] = next_w[j] + beta * (next_w[j] - w[j]);
    }
    zb = next_b + beta * (next_b - b);
    w = next_w;
    b = next_b;
    objective = next_objective;
    momentum = next_momentum;
    model.iterations_ = iter;

    // Gradient mapping at the accepted iterate.
    double probe_b = 0.0;
    prox_step(w, b, probe_w, probe_b);
    double mapping = (probe_b - b) * (probe_b - b);
    for (std::size_t j = 0; j < d; ++j) {
      mapping += (probe_w[j] - w[j]) * (probe_w[j] - w[j]);
    }
    if (std::sqrt(mapping) / step <= params.tolerance * std::max(1.0, n)) {
      model.converged_ = true;
      break;
    }
  }
  model.w_ = std::move(w);
  model.b_ = b;
  return model;
}

LogisticRegression LogisticRegression::FromWeights(std::vector<double> w,
                                                   double b) {
  LogisticRegression model;
  model.w_ = std::move(w);
  model.b_ = b;
  model.converged_ = true;
  return model;
}

double LogisticRegression::PredictProba(std::span<const double> row) const {
  if (row.size() != w_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(w_.size()) + " features");
  }
  double z = b_;
  for (std::size_t j = 0; j < w_.size(); ++j) z += w_[j] * row[j];
  return Sigmoid(z);
}

std::vector<double> LogisticRegression::PredictProba(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = PredictProba(x.row(i));
  return out;
}

nlohmann::json LogisticRegression::ToJson() const {
  return {{"params",
           {{"penalty", params_.penalty == Penalty::kL1 ? "l1" : "l2"},
            {"C", params_.c},
            {"max_iterations", params_.max_iterations},
            {"tolerance", params_.tolerance}}},
          {"weights", w_},
          {"intercept", b_},
          {"converged", converged_},
          {"iterations", iterations_}};
}

LogisticRegression LogisticRegression::FromJson(const nlohmann::json& doc) {
  LogisticRegression model;
  const auto& p = doc.at("params");
  model.params_.penalty = p.at("penalty") == "l1" ? Penalty::kL1 : Penalty::kL2;
  model.params_.c = p.at("C");
  model.params_.max_iterations = p.at("max_iterations");
  model.params_.tolerance = p.at("tolerance");
  model.w_ = doc.at("weights").get<std::vector<double>>();
  model.b_ = doc.at("intercept");
  model.converged_ = doc.at("converged");
  model.iterations_ = doc.at("iterations");
  return model;
}

}  // namespace sentinel::models
