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

#include "sentinel/graph/snapshot_json.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sentinel/core/error.h"

namespace sentinel::graph {

using nlohmann::json;

json NodeToJson(const GraphNode& node) {
  json metrics = json::object();
  for (const auto& [name, value] : node.metrics) metrics[name] = value;
  return {
      {"id", node.id},
      {"kind", KindName(node.kind)},
      {"name", node.name},
      {"metrics", std::move(metrics)},
      {"anomaly_score",
       node.anomaly_score ? json(*node.anomaly_score) : json(nullptr)},
      {"score_source", ScoreSourceName(node.score_source)},
  };
}

json SnapshotToJson(const GraphSnapshot& snapshot) {
  json nodes = json::array();
  for (const auto& node : snapshot.nodes) nodes.push_back(NodeToJson(node));
  json edges = json::array();
  for (const auto& edge : snapshot.edges) {
    edges.push_back({{"src", edge.src},
                     {"dst", edge.dst},
                     {"edge_type", EdgeTypeName(edge.edge_type)}});
  }
  return {{"taken_at", snapshot.taken_at},
          {"sequence", snapshot.sequence},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)}};
}

GraphSnapshot SnapshotFromJson(const json& doc) {
  GraphSnapshot snapshot;
  try {
    snapshot.taken_at = doc.at("taken_at").get<double>();
    snapshot.sequence = doc.at("sequence").get<std::uint64_t>();
    for (const auto& item : doc.at("nodes")) {
      GraphNode node;
      node.id = item.at("id").get<std::string>();
      node.kind = ParseKind(item.at("kind").get<std::string>());
      node.name = item.value("name", std::string());
      for (const auto& [name, value] : item.at("metrics").items()) {
        node.metrics[name] = value.get<double>();
      }
      const auto& score = item.at("anomaly_score");
      if (!score.is_null()) node.anomaly_score = score.get<double>();
      node.score_source =
          ParseScoreSource(item.value("score_source", std::string("none")));
      node.last_updated = snapshot.taken_at;
      snapshot.nodes.push_back(std::move(node));
    }
    for (const auto& item : doc.at("edges")) {
      snapshot.edges.push_back(
          {item.at("src").get<std::string>(), item.at("dst").get<std::string>(),
           ParseEdgeType(item.at("edge_type").get<std::string>()),
           snapshot.taken_at});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("snapshot: ") + e.what());
  }
  std::sort(snapshot.nodes.begin(), snapshot.nodes.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(snapshot.edges.begin(), snapshot.edges.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.src, a.dst, a.edge_type) <
                     std::tie(b.src, b.dst, b.edge_type);
            });
  return snapshot;
}

void WriteSnapshotFile(const std::string& path, const GraphSnapshot& snapshot) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << SnapshotToJson(snapshot).dump(2) << "\n";
}

GraphSnapshot ReadSnapshotFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc = json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kParseError, path + ": not valid JSON");
  }
  return SnapshotFromJson(doc);
}

}  // namespace sentinel::graph
