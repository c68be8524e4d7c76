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

#ifndef SENTINEL_GRAPH_SNAPSHOT_JSON_H_
#define SENTINEL_GRAPH_SNAPSHOT_JSON_H_

#include <string>

#include "json.hpp"
#include "sentinel/graph/graph_store.h"

namespace sentinel::graph {

// Snapshot document: {taken_at, sequence, nodes: [{id, kind, name, metrics,
// anomaly_score, score_source}], edges: [{src, dst, edge_type}]}.
// Unset scores are written as null.
nlohmann::json NodeToJson(const GraphNode& node);
nlohmann::json SnapshotToJson(const GraphSnapshot& snapshot);

// Throws kParseError on schema violations, kUnknownKind on unknown kinds.
// Nodes get last_updated = taken_at and edges created_at = taken_at, since
// the document does not carry them.
GraphSnapshot SnapshotFromJson(const nlohmann::json& doc);

void WriteSnapshotFile(const std::string& path, const GraphSnapshot& snapshot);
GraphSnapshot ReadSnapshotFile(const std::string& path);

}  // namespace sentinel::graph

#endif  // SENTINEL_GRAPH_SNAPSHOT_JSON_H_
