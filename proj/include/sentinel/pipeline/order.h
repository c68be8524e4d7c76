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


// Bottom-up evaluation order of component kinds.

#ifndef SENTINEL_PIPELINE_ORDER_H_
#define SENTINEL_PIPELINE_ORDER_H_

#include <map>
#include <set>
#include <vector>

#include "sentinel/pipeline/config.h"

namespace sentinel::pipeline {

// Kinds that can be found across one (edge_type, direction) hop from `kind`
// in the cluster resource model, e.g. (ReplicaSet, MANAGES, out) -> {Pod}.
std::set<ComponentKind> NeighborKinds(ComponentKind kind, EdgeType edge_type,
                                      Direction direction);

// Position in the resource hierarchy from the bottom (Container) up; used to
// break ties between independent kinds.
int HierarchyRank(ComponentKind kind);

// For every enabled kind, the enabled kinds whose scores it consumes, either
// as an aggregator or through a "score" neighbour feature. Metric-valued
// neighbour features read raw metrics and create no ordering constraint.
std::map<ComponentKind, std::set<ComponentKind>> ScoreDependencies(
    const std::map<ComponentKind, KindPolicy>& policies);

// Topological order over the enabled kinds, ties broken by HierarchyRank.
// Throws kCyclicPolicy naming the cycle, e.g. "Pod -> Node -> Pod".
std::vector<ComponentKind> EvaluationOrder(const std::map<ComponentKind, KindPolicy>& policies);

// Empty when `order` lists every enabled kind once and respects the
// dependencies; otherwise the reason.
std::string CheckOrder(const std::vector<ComponentKind>& order,
                       const std::map<ComponentKind, KindPolicy>& policies);

}  // namespace sentinel::pipeline

#endif  // SENTINEL_PIPELINE_ORDER_H_
