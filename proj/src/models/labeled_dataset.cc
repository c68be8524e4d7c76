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

#include "sentinel/models/labeled_dataset.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "sentinel/core/error.h"

namespace sentinel::models {

std::size_t LabeledDataset::positives() const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), true));
}

void LabeledDataset::RequireBothClasses() const {
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "label count != row count");
  }
  const std::size_t pos = positives();
  if (pos == 0 || pos == y.size()) {
    throw Error(ErrorCode::kSingleClass,
                pos == 0 ? "no anomalous rows" : "no normal rows");
  }
}

TrainTestSplit StratifiedSplit(const LabeledDataset& data, double test_fraction,
                               std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "test_fraction must be in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (bool label : {false, true}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.y.size(); ++i) {
      if (data.y[i] == label) rows.push_back(i);
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    auto take = static_cast<std::size_t>(
        std::lround(test_fraction * static_cast<double>(rows.size())));
    if (rows.size() >= 2) take = std::clamp<std::size_t>(take, 1, rows.size() - 1);
    else take = 0;
    test_rows.insert(test_rows.end(), rows.begin(),
                     rows.begin() + static_cast<std::ptrdiff_t>(take));
    train_rows.insert(train_rows.end(),
                      rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  if (test_rows.empty() || train_rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "too few rows to split");
  }
  auto pick = [&](const std::vector<std::size_t>& rows) {
    LabeledDataset part{data.x.SelectRows(rows), {}};
    for (std::size_t r : rows) part.y.push_back(data.y[r]);
    return part;
  };
  return {pick(train_rows), pick(test_rows)};
}

}  // namespace sentinel::models
