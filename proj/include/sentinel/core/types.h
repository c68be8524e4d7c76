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

#ifndef SENTINEL_CORE_TYPES_H_
#define SENTINEL_CORE_TYPES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sentinel {

// Seconds since the unix epoch. Simulated runs use small synthetic values.
using Timestamp = double;

enum class ComponentKind {
  kCluster,
  kNode,
  kNamespace,
  kDeployment,
  kStatefulSet,
  kReplicaSet,
  kPod,
  kContainer,
  kService,
  kPort,
  kLabel,
};

inline constexpr std::array<ComponentKind, 11> kAllKinds = {
    ComponentKind::kCluster,    ComponentKind::kNode,
    ComponentKind::kNamespace,  ComponentKind::kDeployment,
    ComponentKind::kStatefulSet, ComponentKind::kReplicaSet,
    ComponentKind::kPod,        ComponentKind::kContainer,
    ComponentKind::kService,    ComponentKind::kPort,
    ComponentKind::kLabel,
};

enum class EdgeType {
  kRunsOn,
  kManages,
  kContains,
  kExposes,
  kSelects,
  kBelongsTo,
};

inline constexpr std::array<EdgeType, 6> kAllEdgeTypes = {
    EdgeType::kRunsOn,  EdgeType::kManages, EdgeType::kContains,
    EdgeType::kExposes, EdgeType::kSelects, EdgeType::kBelongsTo,
};

enum class Direction { kIn, kOut, kBoth };

enum class ScoreSource { kNone, kModel, kAggregate };

std::string_view KindName(ComponentKind kind);
std::string_view EdgeTypeName(EdgeType type);
std::string_view DirectionName(Direction direction);
std::string_view ScoreSourceName(ScoreSource source);

// Parsing throws Error(kUnknownKind / kInvalidArgument) on unknown names.
// Kind names accept the canonical spelling ("ReplicaSet") case-insensitively.
ComponentKind ParseKind(std::string_view name);
EdgeType ParseEdgeType(std::string_view name);
Direction ParseDirection(std::string_view name);
ScoreSource ParseScoreSource(std::string_view name);

std::optional<ComponentKind> TryParseKind(std::string_view name);

}  // namespace sentinel

#endif  // SENTINEL_CORE_TYPES_H_
