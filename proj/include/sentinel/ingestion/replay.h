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


// Line-delimited JSON recordings of metric batches, one batch per line:
//
//   {"ts": 12.0, "updates": [{"id": "...", "metric": "...", "value": 0.1}]}

#ifndef SENTINEL_INGESTION_REPLAY_H_
#define SENTINEL_INGESTION_REPLAY_H_

#include <string>
#include <vector>

#include "sentinel/ingestion/metric_batch.h"

namespace sentinel::ingestion {

// Throws kNotFound when the file cannot be created.
void RecordReplay(const std::string& path, const std::vector<MetricBatch>& batches);

// Batches in timestamp order (stable for equal timestamps). Blank lines are
// skipped. Throws ParseError carrying the 1-based line, kNotFound when
// the file cannot be opened.
std::vector<MetricBatch> LoadReplay(const std::string& path);

}  // namespace sentinel::ingestion

#endif  // SENTINEL_INGESTION_REPLAY_H_
