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

#include <algorithm>
#include <cctype>
#include <string>

#include "sentinel/core/error.h"
#include "sentinel/core/types.h"

namespace sentinel {

namespace {

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownKind: return "UnknownKind";
    case ErrorCode::kUndeclaredMetric: return "UndeclaredMetric";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kDanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kInconsistentSnapshot: return "InconsistentSnapshot";
    case ErrorCode::kHttpError: return "HttpError";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kPartialResult: return "PartialResult";
    case ErrorCode::kUnknownTarget: return "UnknownTarget";
    case ErrorCode::kDuplicateFault: return "DuplicateFault";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kDegenerateGrouping: return "DegenerateGrouping";
    case ErrorCode::kEmptyTrials: return "EmptyTrials";
    case ErrorCode::kCyclicPolicy: return "CyclicPolicy";
    case ErrorCode::kNoNodes: return "NoNodes";
    case ErrorCode::kMissingBundle: return "MissingBundle";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

std::string_view KindName(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kCluster: return "Cluster";
    case ComponentKind::kNode: return "Node";
    case ComponentKind::kNamespace: return "Namespace";
    case ComponentKind::kDeployment: return "Deployment";
    case ComponentKind::kStatefulSet: return "StatefulSet";
    case ComponentKind::kReplicaSet: return "ReplicaSet";
    case ComponentKind::kPod: return "Pod";
    case ComponentKind::kContainer: return "Container";
    case ComponentKind::kService: return "Service";
    case ComponentKind::kPort: return "Port";
    case ComponentKind::kLabel: return "Label";
  }
  return "?";
}

std::string_view EdgeTypeName(EdgeType type) {
  switch (type) {
    case EdgeType::kRunsOn: return "RUNS_ON";
    case EdgeType::kManages: return "MANAGES";
    case EdgeType::kContains: return "CONTAINS";
    case EdgeType::kExposes: return "EXPOSES";
    case EdgeType::kSelects: return "SELECTS";
    case EdgeType::kBelongsTo: return "BELONGS_TO";
  }
  return "?";
}

std::string_view DirectionName(Direction direction) {
  switch (direction) {
    case Direction::kIn: return "in";
    case Direction::kOut: return "out";
    case Direction::kBoth: return "both";
  }
  return "?";
}

std::string_view ScoreSourceName(ScoreSource source) {
  switch (source) {
    case ScoreSource::kNone: return "none";
    case ScoreSource::kModel: return "model";
    case ScoreSource::kAggregate: return "aggregate";
  }
  return "?";
}

std::optional<ComponentKind> TryParseKind(std::string_view name) {
  for (ComponentKind kind : kAllKinds) {
    if (EqualsIgnoreCase(name, KindName(kind))) return kind;
  }
  return std::nullopt;
}

ComponentKind ParseKind(std::string_view name) {
  if (auto kind = TryParseKind(name)) return *kind;
  throw Error(ErrorCode::kUnknownKind, std::string(name));
}

EdgeType ParseEdgeType(std::string_view name) {
  for (EdgeType type : kAllEdgeTypes) {
    if (EqualsIgnoreCase(name, EdgeTypeName(type))) return type;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown edge type '" + std::string(name) + "'");
}

Direction ParseDirection(std::string_view name) {
  for (Direction d : {Direction::kIn, Direction::kOut, Direction::kBoth}) {
    if (EqualsIgnoreCase(name, DirectionName(d))) return d;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown direction '" + std::string(name) + "'");
}

ScoreSource ParseScoreSource(std::string_view name) {
  for (ScoreSource s :
       {ScoreSource::kNone, ScoreSource::kModel, ScoreSource::kAggregate}) {
    if (EqualsIgnoreCase(name, ScoreSourceName(s))) return s;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown score source '" + std::string(name) + "'");
}

}  // namespace sentinel
