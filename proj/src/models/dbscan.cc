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

#include "sentinel/models/dbscan.h"

#include <deque>

#include "sentinel/core/error.h"

namespace sentinel::models {

namespace {

constexpr int kUnvisited = -2;
constexpr int kNoise = -1;

std::vector<std::size_t> RegionQuery(const FeatureMatrix& x, std::size_t p,
                                     double eps_squared) {
  std::vector<std::size_t> neighbours;
  for (std::size_t q = 0; q < x.rows(); ++q) {
    if (SquaredDistance(x.row(p), x.row(q)) <= eps_squared) {
      neighbours.push_back(q);
    }
  }
  return neighbours;
}

}  // namespace

void DbscanParams::Validate() const {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be > 0");
  if (min_samples < 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_samples must be >= 1");
  }
}

AnomalyLabeling DbscanLabel(const FeatureMatrix& x,
                            const DbscanParams& params) {
  params.Validate();
  const std::size_t n = x.rows();
  const double eps_squared = params.eps * params.eps;
  const auto min_samples = static_cast<std::size_t>(params.min_samples);

  std::vector<int> cluster(n, kUnvisited);
  int next_cluster = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (cluster[p] != kUnvisited) continue;
    auto neighbours = RegionQuery(x, p, eps_squared);
    if (neighbours.size() < min_samples) {
      cluster[p] = kNoise;  // may still become a border point later
      continue;
    }
    const int id = next_cluster++;
    cluster[p] = id;
    std::deque<std::size_t> seeds(neighbours.begin(), neighbours.end());
    while (!seeds.empty()) {
      const std::size_t q = seeds.front();
      seeds.pop_front();
      if (cluster[q] == kNoise) cluster[q] = id;
      if (cluster[q] != kUnvisited) continue;
      cluster[q] = id;
      auto expansion = RegionQuery(x, q, eps_squared);
      if (expansion.size() >= min_samples) {
        seeds.insert(seeds.end(), expansion.begin(), expansion.end());
      }
    }
  }

  AnomalyLabeling result;
  result.clusters = std::move(cluster);
  result.labels.resize(n);
  result.raw_scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool noise = result.clusters[i] == kNoise;
    result.labels[i] = noise;
    result.raw_scores[i] = noise ? 1.0 : 0.0;
  }
  return result;
}

}  // namespace sentinel::models
