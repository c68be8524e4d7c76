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

#include "sentinel/models/isolation_forest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sentinel/core/error.h"
#include "sentinel/core/random.h"

namespace sentinel::models {

namespace {

constexpr double kEulerGamma = 0.5772156649;

struct BuildFrame {
  int node;
  std::size_t begin;
  std::size_t end;
  int depth;
};

IsolationForest::Tree GrowTree(const FeatureMatrix& x,
                               std::vector<std::size_t> sample,
                               std::span<const std::size_t> features,
                               int max_depth, std::mt19937_64& rng) {
  IsolationForest::Tree tree;
  tree.push_back({});
  std::vector<BuildFrame> stack = {{0, 0, sample.size(), 0}};
  std::vector<std::size_t> splittable;
  std::vector<std::pair<double, double>> ranges(features.size());

  while (!stack.empty()) {
    const BuildFrame frame = stack.back();
    stack.pop_back();
    const std::size_t count = frame.end - frame.begin;
    tree[frame.node].size = static_cast<int>(count);
    if (frame.depth >= max_depth || count <= 1) continue;

    splittable.clear();
    for (std::size_t f = 0; f < features.size(); ++f) {
      double lo = x(sample[frame.begin], features[f]);
      double hi = lo;
      for (std::size_t i = frame.begin + 1; i < frame.end; ++i) {
        const double v = x(sample[i], features[f]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      ranges[f] = {lo, hi};
      if (hi > lo) splittable.push_back(f);
    }
    if (splittable.empty()) continue;  // identical rows: leaf

    std::uniform_int_distribution<std::size_t> pick(0, splittable.size() - 1);
    const std::size_t f = splittable[pick(rng)];
    const auto [lo, hi] = ranges[f];
    std::uniform_real_distribution<double> uniform(lo, hi);
    double threshold = uniform(rng);
    if (threshold <= lo) threshold = std::nextafter(lo, hi);

    const std::size_t feature = features[f];
    auto mid = std::partition(
        sample.begin() + static_cast<std::ptrdiff_t>(frame.begin),
        sample.begin() + static_cast<std::ptrdiff_t>(frame.end),
        [&](std::size_t row) { return x(row, feature) < threshold; });
    const auto split = static_cast<std::size_t>(mid - sample.begin());

    const int left = static_cast<int>(tree.size());
    tree.push_back({});
    const int right = static_cast<int>(tree.size());
    tree.push_back({});
    auto& node = tree[frame.node];
    node.feature = static_cast<int>(feature);
    node.threshold = threshold;
    node.left = left;
    node.right = right;
    stack.push_back({right, split, frame.end, frame.depth + 1});
    stack.push_back({left, frame.begin, split, frame.depth + 1});
  }
  return tree;
}

}  // namespace

void IsolationForestParams::Validate() const {
  if (n_estimators < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_estimators must be >= 1");
  }
  if (!(max_samples > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max_samples must be > 0");
  }
  if (!(max_features > 0.0 && max_features <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max_features must be in (0, 1]");
  }
  if (!(contamination > 0.0 && contamination <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument,
                "contamination must be in (0, 0.5]");
  }
}

double HarmonicNumber(double k) {
  if (k <= 0.0) return 0.0;
  if (k > 20.0) return std::log(k) + kEulerGamma;
  double sum = 0.0;
  const int n = static_cast<int>(std::lround(k));
  for (int i = 1; i <= n; ++i) sum += 1.0 / i;
  return sum;
}

double AveragePathLength(double m) {
  if (m <= 1.0) return 0.0;
  return 2.0 * HarmonicNumber(m - 1.0) - 2.0 * (m - 1.0) / m;
}

double ScoreFromPathLength(double mean_path, double psi) {
  return std::exp2(-mean_path / AveragePathLength(psi));
}

IsolationForest IsolationForest::Fit(const FeatureMatrix& x,
                                     const IsolationForestParams& params) {
  params.Validate();
  if (x.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "isolation forest needs n >= 2");
  }
  IsolationForest forest;
  forest.params_ = params;
  forest.dims_ = x.cols();
  const std::size_t n = x.rows();
  std::size_t psi = params.max_samples <= 1.0
                        ? static_cast<std::size_t>(
                              std::ceil(params.max_samples * static_cast<double>(n)))
                        : static_cast<std::size_t>(params.max_samples);
  psi = std::clamp<std::size_t>(psi, 2, n);
  forest.psi_ = psi;
  const int max_depth =
      static_cast<int>(std::ceil(std::log2(static_cast<double>(psi))));
  const auto n_features = std::clamp<std::size_t>(
      static_cast<std::size_t>(
          std::ceil(params.max_features * static_cast<double>(x.cols()))),
      1, x.cols());

  forest.degenerate_ = true;
  for (std::size_t i = 1; i < n && forest.degenerate_; ++i) {
    forest.degenerate_ = std::equal(x.row(i).begin(), x.row(i).end(),
                                    x.row(0).begin());
  }

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> feature_pool(x.cols());
  std::iota(feature_pool.begin(), feature_pool.end(), 0);

  forest.trees_.reserve(static_cast<std::size_t>(params.n_estimators));
  for (int t = 0; t < params.n_estimators; ++t) {
    std::mt19937_64 rng(DeriveSeed(params.rng_seed, static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> sample(psi);
    if (params.bootstrap) {
      std::uniform_int_distribution<std::size_t> draw(0, n - 1);
      for (auto& s : sample) s = draw(rng);
    } else {
      std::vector<std::size_t> pool = all;
      for (std::size_t i = 0; i < psi; ++i) {
        std::uniform_int_distribution<std::size_t> draw(i, n - 1);
        std::swap(pool[i], pool[draw(rng)]);
      }
      std::copy_n(pool.begin(), psi, sample.begin());
    }
    std::vector<std::size_t> features = feature_pool;
    for (std::size_t i = 0; i < n_features; ++i) {
      std::uniform_int_distribution<std::size_t> draw(i, features.size() - 1);
      std::swap(features[i], features[draw(rng)]);
    }
    features.resize(n_features);
    std::sort(features.begin(), features.end());
    forest.trees_.push_back(
        GrowTree(x, std::move(sample), features, max_depth, rng));
  }
  return forest;
}

double IsolationForest::PathLength(std::span<const double> row) const {
  double total = 0.0;
  for (const auto& tree : trees_) {
    int node = 0;
    int depth = 0;
    while (tree[node].feature >= 0) {
      node = row[tree[node].feature] < tree[node].threshold ? tree[node].left
                                                            : tree[node].right;
      ++depth;
    }
    total += depth + AveragePathLength(tree[node].size);
  }
  return total / static_cast<double>(trees_.size());
}

double IsolationForest::Score(std::span<const double> row) const {
  if (row.size() != dims_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(dims_) + " features, got " +
                    std::to_string(row.size()));
  }
  return ScoreFromPathLength(PathLength(row), static_cast<double>(psi_));
}

std::vector<double> IsolationForest::Score(const FeatureMatrix& x) const {
  std::vector<double> scores(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) scores[i] = Score(x.row(i));
  return scores;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "empty quantile");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

AnomalyLabeling IsolationForest::Label(const FeatureMatrix& x,
                                       double contamination) const {
  if (!(contamination > 0.0 && contamination <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument,
                "contamination must be in (0, 0.5]");
  }
  AnomalyLabeling result;
  result.raw_scores = Score(x);
  const double threshold = Quantile(result.raw_scores, 1.0 - contamination);
  result.labels.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    result.labels[i] = result.raw_scores[i] > threshold;
  }
  result.degenerate = degenerate_;
  return result;
}

}  // namespace sentinel::models
