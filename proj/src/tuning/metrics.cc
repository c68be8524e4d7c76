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


#include "sentinel/tuning/metrics.h"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include "sentinel/core/error.h"

namespace sentinel::tuning {

double SilhouetteScore(const models::FeatureMatrix& x, const std::vector<int>& assignment) {
  const std::size_t n = x.rows();
  if (assignment.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "assignment has " + std::to_string(assignment.size()) + " entries for " +
                    std::to_string(n) + " rows");
  }
  if (n < 3) throw Error(ErrorCode::kDegenerateGrouping, "need at least 3 samples");

  std::map<int, std::size_t> index;
  for (int g : assignment) index.emplace(g, 0);
  if (index.size() < 2) {
    throw Error(ErrorCode::kDegenerateGrouping, "need at least 2 groups");
  }
  std::size_t next = 0;
  for (auto& [g, i] : index) i = next++;
  const std::size_t k = index.size();
  std::vector<std::size_t> group(n);
  std::vector<double> size(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    group[i] = index[assignment[i]];
    size[group[i]] += 1.0;
  }

  // Pairwise distances are cached while the matrix stays small.
  constexpr std::size_t kMaxCached = 4000;
  std::vector<double> dist;
  if (n <= kMaxCached) {
    dist.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      dist[i * n + i] = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = models::Distance(x.row(i), x.row(j));
        dist[i * n + j] = d;
        dist[j * n + i] = d;
      }
    }
  }
  auto distance = [&](std::size_t i, std::size_t j) {
    return dist.empty() ? models::Distance(x.row(i), x.row(j)) : dist[i * n + j];
  };

  double total = 0.0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = group[i];
    if (size[own] <= 1.0) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) sums[group[j]] += distance(i, j);
    const double a = sums[own] / (size[own] - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < k; ++g) {
      if (g != own) b = std::min(b, sums[g] / size[g]);
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

double SilhouetteScore(const models::FeatureMatrix& x, const models::AnomalyLabeling& labeling,
                       SilhouetteMode mode) {
  std::vector<int> assignment(labeling.labels.size());
  if (mode == SilhouetteMode::kPerCluster && !labeling.clusters.empty()) {
    assignment = labeling.clusters;
  } else {
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      assignment[i] = labeling.labels[i] ? 1 : 0;
    }
  }
  return SilhouetteScore(x, assignment);
}

ConfusionCounts Confusion(const std::vector<bool>& truth, const std::vector<bool>& predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "truth and prediction lengths differ");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i]) {
      predicted[i] ? ++c.tp : ++c.fn;
    } else {
      predicted[i] ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

F1Result F1Score(const ConfusionCounts& c) {
  const double denom = static_cast<double>(c.tp) + 0.5 * static_cast<double>(c.fp + c.fn);
  if (c.tp + c.fp + c.fn == 0) return {0.0, true};
  return {static_cast<double>(c.tp) / denom, false};
}

}  // namespace sentinel::tuning
