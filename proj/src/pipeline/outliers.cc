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


#include "sentinel/pipeline/outliers.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sentinel/core/error.h"

namespace sentinel::pipeline {

InjectionResult InjectSyntheticOutliers(const models::FeatureMatrix& x,
                                        const std::vector<bool>& labels,
                                        const OutlierInjectionConfig& config,
                                        std::uint64_t seed) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (labels.size() != n) throw Error(ErrorCode::kInvalidArgument, "labels and rows differ");
  const auto min_count = static_cast<std::size_t>(std::max(config.min_count, 1));
  if (n < min_count) {
    throw Error(ErrorCode::kTooFewRows, "have " + std::to_string(n) + " rows, need " +
                                            std::to_string(min_count));
  }
  const auto by_fraction =
      static_cast<std::size_t>(std::ceil(config.fraction * static_cast<double>(n)));
  const std::size_t count = std::min(n, std::max(min_count, by_fraction));

  std::vector<double> sigma(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const auto col = x.Column(j);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double s = std::sqrt(ss / static_cast<double>(n));
    sigma[j] = s > 1e-12 * std::max(1.0, std::abs(mean)) ? s : 0.0;
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  order.resize(count);

  InjectionResult out;
  std::vector<double> values = x.values();
  values.reserve((n + count) * d);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t src : order) {
    for (std::size_t j = 0; j < d; ++j) {
      const double sign = coin(rng) ? 1.0 : -1.0;
      values.push_back(x(src, j) + sign * config.sigma_shift * sigma[j]);
    }
  }
  out.sources = order;
  out.data.x = models::FeatureMatrix(n + count, d, std::move(values), x.feature_names());
  out.data.y = labels;
  out.data.y.resize(n + count, true);
  return out;
}

}  // namespace sentinel::pipeline
