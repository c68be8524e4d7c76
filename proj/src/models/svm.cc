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

#include "sentinel/models/svm.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "sentinel/core/error.h"

namespace sentinel::models {

namespace {

constexpr std::size_t kMaxCachedRows = 2500;

class KernelMatrix {
 public:
  KernelMatrix(const FeatureMatrix& x, const SvmParams& params)
      : x_(x), params_(params), n_(x.rows()) {
    if (n_ <= kMaxCachedRows) {
      cache_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
          const double k = Kernel(params_, x_.row(i), x_.row(j));
          cache_[i * n_ + j] = k;
          cache_[j * n_ + i] = k;
        }
      }
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (!cache_.empty()) return cache_[i * n_ + j];
    return Kernel(params_, x_.row(i), x_.row(j));
  }

 private:
  const FeatureMatrix& x_;
  const SvmParams& params_;
  std::size_t n_;
  std::vector<double> cache_;
};

class SmoSolver {
 public:
  SmoSolver(const LabeledDataset& data, const SvmParams& params)
      : params_(params),
        kernel_(data.x, params),
        n_(data.x.rows()),
        y_(n_),
        alpha_(n_, 0.0),
        error_(n_),
        rng_(params.rng_seed) {
    for (std::size_t i = 0; i < n_; ++i) {
      y_[i] = data.y[i] ? 1.0 : -1.0;
      error_[i] = -y_[i];  // f = 0 initially
    }
  }

  bool Run() {
    int clean_passes = 0;
    bool examine_all = true;
    while (updates_ < params_.max_iterations) {
      int changed = 0;
      if (examine_all) {
        const std::size_t start = RandomOffset();
        for (std::size_t k = 0; k < n_; ++k) {
          changed += ExamineExample((start + k) % n_);
        }
      } else {
        for (std::size_t i = 0; i < n_; ++i) {
          if (IsFree(i)) changed += ExamineExample(i);
        }
      }
      if (examine_all) {
        if (changed == 0) {
          if (++clean_passes >= params_.max_passes) return true;
        } else {
          clean_passes = 0;
          examine_all = false;
        }
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    return false;
  }

  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& y() const { return y_; }
  double bias() const { return bias_; }
  const KernelMatrix& kernel() const { return kernel_; }

 private:
  bool IsFree(std::size_t i) const {
    return alpha_[i] > 0.0 && alpha_[i] < params_.c;
  }

  std::size_t RandomOffset() {
    std::uniform_int_distribution<std::size_t> draw(0, n_ - 1);
    return draw(rng_);
  }

  int ExamineExample(std::size_t i2) {
    const double r2 = error_[i2] * y_[i2];
    const double tol = params_.smo_tolerance;
    if (!((r2 < -tol && alpha_[i2] < params_.c) || (r2 > tol && alpha_[i2] > 0.0))) {
      return 0;
    }
    // Second choice heuristic: maximise |E1 - E2| over the free multipliers.
    std::size_t best = n_;
    double best_gap = -1.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!IsFree(i)) continue;
      ++free_count;
      const double gap = std::abs(error_[i] - error_[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (free_count > 1 && best != n_ && TakeStep(best, i2)) return 1;
    std::size_t start = RandomOffset();
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (start + k) % n_;
      if (IsFree(i1) && TakeStep(i1, i2)) return 1;
    }
    start = RandomOffset();
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (start + k) % n_;
      if (TakeStep(i1, i2)) return 1;
    }
    return 0;
  }

  bool TakeStep(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double c = params_.c;
    const double a1_old = alpha_[i1];
    const double a2_old = alpha_[i2];
    const double y1 = y_[i1];
    const double y2 = y_[i2];
    const double e1 = error_[i1];
    const double e2 = error_[i2];
    const double s = y1 * y2;
    double lo, hi;
    if (s < 0) {
      lo = std::max(0.0, a2_old - a1_old);
      hi = std::min(c, c + a2_old - a1_old);
    } else {
      lo = std::max(0.0, a1_old + a2_old - c);
      hi = std::min(c, a1_old + a2_old);
    }
    if (hi - lo < 1e-14) return false;
    const double k11 = kernel_(i1, i1);
    const double k12 = kernel_(i1, i2);
    const double k22 = kernel_(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;
    double a2;
    if (eta > 1e-12) {
      a2 = std::clamp(a2_old + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Objective is linear along the constraint line; move to the better end.
      const double slope = y2 * (e1 - e2);
      if (slope > 0) a2 = hi;
      else if (slope < 0) a2 = lo;
      else return false;
    }
    if (std::abs(a2 - a2_old) < 1e-12 * (a2 + a2_old + 1e-12)) return false;
    double a1 = a1_old + s * (a2_old - a2);
    a1 = std::clamp(a1, 0.0, c);

    const double d1 = y1 * (a1 - a1_old);
    const double d2 = y2 * (a2 - a2_old);
    const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
    double bias;
    if (a1 > 0.0 && a1 < c) bias = b1;
    else if (a2 > 0.0 && a2 < c) bias = b2;
    else bias = 0.5 * (b1 + b2);
    const double db = bias - bias_;
    for (std::size_t i = 0; i < n_; ++i) {
      error_[i] += d1 * kernel_(i1, i) + d2 * kernel_(i2, i) + db;
    }
    alpha_[i1] = a1;
    alpha_[i2] = a2;
    bias_ = bias;
    ++updates_;
    return true;
  }

  const SvmParams& params_;
  KernelMatrix kernel_;
  std::size_t n_;
  std::vector<double> y_;
  std::vector<double> alpha_;
  std::vector<double> error_;
  double bias_ = 0.0;
  int updates_ = 0;
  std::mt19937_64 rng_;
};

std::string_view KernelName(SvmKernel k) {
  return k == SvmKernel::kLinear ? "linear" : "rbf";
}

}  // namespace

void SvmParams::Validate() const {
  if (!(c > 0.0)) throw Error(ErrorCode::kInvalidArgument, "C must be > 0");
  if (kernel == SvmKernel::kRbf && !(gamma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must be > 0");
  }
  if (!(smo_tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smo_tolerance must be > 0");
  }
  if (max_passes < 1) throw Error(ErrorCode::kInvalidArgument, "max_passes must be >= 1");
  if (!(calibration_fraction > 0.0 && calibration_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "calibration_fraction must be in (0, 1)");
  }
}

double Kernel(const SvmParams& params, std::span<const double> a,
              std::span<const double> b) {
  if (params.kernel == SvmKernel::kLinear) {
    double dot = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
    return dot;
  }
  return std::exp(-params.gamma * SquaredDistance(a, b));
}

double SvmDualObjective(const LabeledDataset& data, const SvmParams& params,
                        std::span<const double> alpha) {
  const std::size_t n = data.x.rows();
  double linear = 0.0;
  double quadratic = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    const double yi = data.y[i] ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (alpha[j] == 0.0) continue;
      const double yj = data.y[j] ? 1.0 : -1.0;
      quadratic += alpha[i] * alpha[j] * yi * yj *
                   Kernel(params, data.x.row(i), data.x.row(j));
    }
  }
  return linear - 0.5 * quadratic;
}

SvmDecision SvmDecision::Train(const LabeledDataset& data,
                               const SvmParams& params) {
  params.Validate();
  data.RequireBothClasses();
  SmoSolver solver(data, params);
  SvmDecision model;
  model.params_ = params;
  model.converged_ = solver.Run();
  model.bias_ = solver.bias();
  model.alphas_ = solver.alpha();
  const std::size_t n = data.x.rows();
  const auto& alpha = solver.alpha();
  const auto& y = solver.y();

  // Residuals recomputed from scratch so no error-cache drift leaks in.
  double quadratic = 0.0;
  double linear = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = model.bias_;
    for (std::size_t j = 0; j < n; ++j) {
      if (alpha[j] > 0.0) f += alpha[j] * y[j] * solver.kernel()(j, i);
    }
    quadratic += alpha[i] * y[i] * (f - model.bias_);
    linear += alpha[i];
    const double r = y[i] * f - 1.0;
    double violation = 0.0;
    if (alpha[i] <= 0.0) violation = std::max(0.0, -r);
    else if (alpha[i] >= params.c) violation = std::max(0.0, r);
    else violation = std::abs(r);
    worst = std::max(worst, violation);
  }
  model.dual_objective_ = linear - 0.5 * quadratic;
  model.max_kkt_violation_ = worst;

  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] <= 0.0) continue;
    auto row = data.x.row(i);
    model.sv_.emplace_back(row.begin(), row.end());
    model.coef_.push_back(alpha[i] * y[i]);
  }
  return model;
}

double SvmDecision::Decision(std::span<const double> row) const {
  double f = bias_;
  for (std::size_t k = 0; k < sv_.size(); ++k) {
    if (sv_[k].size() != row.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "expected " + std::to_string(sv_[k].size()) + " features");
    }
    f += coef_[k] * Kernel(params_, sv_[k], row);
  }
  return f;
}

nlohmann::json SvmDecision::ToJson() const {
  return {{"params",
           {{"kernel", KernelName(params_.kernel)},
            {"C", params_.c},
            {"gamma", params_.gamma},
            {"smo_tolerance", params_.smo_tolerance},
            {"max_passes", params_.max_passes},
            {"max_iterations", params_.max_iterations},
            {"calibration_fraction", params_.calibration_fraction},
            {"rng_seed", params_.rng_seed}}},
          {"support_vectors", sv_},
          {"coefficients", coef_},
          {"bias", bias_},
          {"converged", converged_},
          {"dual_objective", dual_objective_}};
}

SvmDecision SvmDecision::FromJson(const nlohmann::json& doc) {
  SvmDecision model;
  const auto& p = doc.at("params");
  model.params_.kernel = p.at("kernel") == "linear" ? SvmKernel::kLinear : SvmKernel::kRbf;
  model.params_.c = p.at("C");
  model.params_.gamma = p.at("gamma");
  model.params_.smo_tolerance = p.at("smo_tolerance");
  model.params_.max_passes = p.at("max_passes");
  model.params_.max_iterations = p.at("max_iterations");
  model.params_.calibration_fraction = p.at("calibration_fraction");
  model.params_.rng_seed = p.at("rng_seed");
  model.sv_ = doc.at("support_vectors").get<std::vector<std::vector<double>>>();
  model.coef_ = doc.at("coefficients").get<std::vector<double>>();
  model.bias_ = doc.at("bias");
  model.converged_ = doc.at("converged");
  model.dual_objective_ = doc.at("dual_objective");
  return model;
}

double PlattSigmoid::operator()(double decision) const {
  const double z = decision * a + b;
  if (z >= 0.0) return std::exp(-z) / (1.0 + std::exp(-z));
  return 1.0 / (1.0 + std::exp(z));
}

PlattSigmoid PlattSigmoid::Fit(std::span<const double> decisions,
                               const std::vector<bool>& labels) {
  const std::size_t n = decisions.size();
  double prior1 = 0.0;
  for (bool l : labels) prior1 += l ? 1.0 : 0.0;
  const double prior0 = static_cast<double>(n) - prior1;
  const double hi_target = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo_target = 1.0 / (prior0 + 2.0);
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = labels[i] ? hi_target : lo_target;

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = decisions[i] * a + b;
      f += z >= 0.0 ? target[i] * z + std::log1p(std::exp(-z))
                    : (target[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return f;
  };

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  double fval = objective(a, b);
  constexpr double kSigma = 1e-12;
  constexpr double kMinStep = 1e-10;
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = decisions[i] * a + b;
      double p, q;
      if (z >= 0.0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += decisions[i] * decisions[i] * d2;
      h22 += d2;
      h21 += decisions[i] * d2;
      const double d1 = target[i] - p;
      g1 += decisions[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= kMinStep) {
      const double na = a + step * da;
      const double nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  return {a, b};
}

SvmClassifier SvmClassifier::Fit(const LabeledDataset& data,
                                 const SvmParams& params) {
  params.Validate();
  data.RequireBothClasses();
  SvmClassifier model;
  model.dims_ = data.x.cols();

  std::optional<TrainTestSplit> split;
  try {
    split = StratifiedSplit(data, params.calibration_fraction, params.rng_seed);
    const std::size_t pos = split->test.positives();
    if (pos == 0 || pos == split->test.y.size()) split.reset();
  } catch (const Error&) {
    split.reset();
  }
  if (!split) {
    model.decision_ = SvmDecision::Train(data, params);
    model.calibration_degenerate_ = true;
    return model;
  }
  model.decision_ = SvmDecision::Train(split->train, params);
  std::vector<double> decisions(split->test.x.rows());
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    decisions[i] = model.decision_.Decision(split->test.x.row(i));
  }
  model.sigmoid_ = PlattSigmoid::Fit(decisions, split->test.y);
  return model;
}

double SvmClassifier::PredictProba(std::span<const double> row) const {
  if (row.size() != dims_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(dims_) + " features");
  }
  return std::clamp(sigmoid_(decision_.Decision(row)), 0.0, 1.0);
}

std::vector<double> SvmClassifier::PredictProba(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = PredictProba(x.row(i));
  return out;
}

nlohmann::json SvmClassifier::ToJson() const {
  return {{"decision", decision_.ToJson()},
          {"platt", {{"a", sigmoid_.a}, {"b", sigmoid_.b}}},
          {"calibration_degenerate", calibration_degenerate_},
          {"dims", dims_}};
}

SvmClassifier SvmClassifier::FromJson(const nlohmann::json& doc) {
  SvmClassifier model;
  model.decision_ = SvmDecision::FromJson(doc.at("decision"));
  model.sigmoid_ = {doc.at("platt").at("a"), doc.at("platt").at("b")};
  model.calibration_degenerate_ = doc.at("calibration_degenerate");
  model.dims_ = doc.at("dims");
  return model;
}

}  // namespace sentinel::models
