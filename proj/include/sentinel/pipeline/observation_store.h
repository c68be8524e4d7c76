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


#ifndef SENTINEL_PIPELINE_OBSERVATION_STORE_H_
#define SENTINEL_PIPELINE_OBSERVATION_STORE_H_

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/core/types.h"
#include "sentinel/models/feature_matrix.h"

namespace sentinel::pipeline {

struct Observation {
  Timestamp ts = 0.0;
  std::string node_id;
  std::vector<double> features;
};

// Bounded per-kind history of feature rows, evicted oldest first. A kind's
// history is dropped when rows with different columns arrive (a policy
// change), since old and new rows are not comparable. Thread-safe.
class ObservationStore {
 public:
  explicit ObservationStore(std::size_t capacity);

  void Append(ComponentKind kind, const std::vector<std::string>& columns,
              Observation observation);
  // One row per `ids[i]` / `x.row(i)`.
  void Append(ComponentKind kind, Timestamp ts, const std::vector<std::string>& ids,
              const models::FeatureMatrix& x);

  std::size_t size(ComponentKind kind) const;
  std::vector<Observation> Rows(ComponentKind kind) const;
  std::vector<std::string> Columns(ComponentKind kind) const;
  // Whole history as a matrix; nullopt when empty.
  std::optional<models::FeatureMatrix> Matrix(ComponentKind kind) const;

  std::size_t capacity() const;
  // Shrinking evicts the oldest rows immediately.
  void set_capacity(std::size_t capacity);
  void Clear();

 private:
  struct History {
    std::vector<std::string> columns;
    std::deque<Observation> rows;
  };

  void AppendLocked(ComponentKind kind, const std::vector<std::string>& columns,
                    Observation observation);

  mutable std::mutex mutex_;
  std::size_t capacity_;
  std::map<ComponentKind, History> histories_;
};

}  // namespace sentinel::pipeline

#endif  // SENTINEL_PIPELINE_OBSERVATION_STORE_H_
