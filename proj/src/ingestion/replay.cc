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


#include "sentinel/ingestion/replay.h"

#include <algorithm>
#include <fstream>

#include "sentinel/core/error.h"

namespace sentinel::ingestion {

void RecordReplay(const std::string& path, const std::vector<MetricBatch>& batches) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kNotFound, "cannot write replay file " + path);
  for (const auto& batch : batches) out << BatchToJson(batch).dump() << '\n';
}

std::vector<MetricBatch> LoadReplay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open replay file " + path);
  std::vector<MetricBatch> batches;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      batches.push_back(BatchFromJson(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError(line_no, path + ": " + e.what());
    }
  }
  std::stable_sort(batches.begin(), batches.end(),
                   [](const MetricBatch& a, const MetricBatch& b) { return a.ts < b.ts; });
  return batches;
}

}  // namespace sentinel::ingestion
