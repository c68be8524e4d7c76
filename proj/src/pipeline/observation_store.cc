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


#include "sentinel/pipeline/observation_store.h"

#include "sentinel/core/error.h"

namespace sentinel::pipeline {

ObservationStore::ObservationStore(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::kInvalidArgument, "capacity must be >= 1");
}

void ObservationStore::AppendLocked(ComponentKind kind,
                                    const std::vector<std::string>& columns,
                                    Observation observation) {
  if (observation.features.size() != columns.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "observation has " + std::to_string(observation.features.size()) +
                    " values for " + std::to_string(columns.size()) + " columns");
  }
  auto& h = histories_[kind];
  if (h.columns != columns) {
    h.rows.clear();
    h.columns = columns;
  }
  h.rows.push_back(std::move(observation));
  while (h.rows.size() > capacity_) h.rows.pop_front();
}

void ObservationStore::Append(ComponentKind kind, const std::vector<std::string>& columns,
                              Observation observation) {
  std::lock_guard lock(mutex_);
  AppendLocked(kind, columns, std::move(observation));
}

void ObservationStore::Append(ComponentKind kind, Timestamp ts,
                              const std::vector<std::string>& ids,
                              const models::FeatureMatrix& x) {
  if (ids.size() != x.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "ids and rows differ in length");
  }
  std::lock_guard lock(mutex_);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto row = x.row(i);
    AppendLocked(kind, x.feature_names(), {ts, ids[i], {row.begin(), row.end()}});
  }
}

std::size_t ObservationStore::size(ComponentKind kind) const {
  std::lock_guard lock(mutex_);
  auto it = histories_.find(kind);
  return it == histories_.end() ? 0 : it->second.rows.size();
}

std::vector<Observation> ObservationStore::Rows(ComponentKind kind) const {
  std::lock_guard lock(mutex_);
  auto it = histories_.find(kind);
  if (it == histories_.end()) return {};
  return {it->second.rows.begin(), it->second.rows.end()};
}

std::vector<std::string> ObservationStore::Columns(ComponentKind kind) const {
  std::lock_guard lock(mutex_);
  auto it = histories_.find(kind);
  return it == histories_.end() ? std::vector<std::string>{} : it->second.columns;
}

std::optional<models::FeatureMatrix> ObservationStore::Matrix(ComponentKind kind) const {
  std::lock_guard lock(mutex_);
  auto it = histories_.find(kind);
  if (it == histories_.end() || it->second.rows.empty()) return std::nullopt;
  const auto& h = it->second;
  std::vector<double> values;
  values.reserve(h.rows.size() * h.columns.size());
  for (const auto& o : h.rows) values.insert(values.end(), o.features.begin(), o.features.end());
  return models::FeatureMatrix(h.rows.size(), h.columns.size(), std::move(values), h.columns);
}

std::size_t ObservationStore::capacity() const {
  std::lock_guard lock(mutex_);
  return capacity_;
}

void ObservationStore::set_capacity(std::size_t capacity) {
  if (capacity == 0) throw Error(ErrorCode::kInvalidArgument, "capacity must be >= 1");
  std::lock_guard lock(mutex_);
  capacity_ = capacity;
  for (auto& [kind, h] : histories_) {
    while (h.rows.size() > capacity_) h.rows.pop_front();
  }
}

void ObservationStore::Clear() {
  std::lock_guard lock(mutex_);
  histories_.clear();
}

}  // namespace sentinel::pipeline
