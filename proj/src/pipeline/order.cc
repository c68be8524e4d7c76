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


#include "sentinel/pipeline/order.h"

#include <algorithm>
#include <functional>
#include <string>
#include <tuple>

namespace sentinel::pipeline {

namespace {

using K = ComponentKind;
using E = EdgeType;

struct Relation {
  K src;
  E edge;
  K dst;
};

constexpr Relation kResourceModel[] = {
    {K::kPod, E::kRunsOn, K::kNode},
    {K::kDeployment, E::kManages, K::kReplicaSet},
    {K::kReplicaSet, E::kManages, K::kPod},
    {K::kStatefulSet, E::kManages, K::kPod},
    {K::kPod, E::kContains, K::kContainer},
    {K::kService, E::kExposes, K::kPort},
    {K::kPod, E::kExposes, K::kPort},
    {K::kContainer, E::kExposes, K::kPort},
    {K::kService, E::kSelects, K::kPod},
    {K::kPod, E::kBelongsTo, K::kNamespace},
    {K::kDeployment, E::kBelongsTo, K::kNamespace},
    {K::kReplicaSet, E::kBelongsTo, K::kNamespace},
    {K::kStatefulSet, E::kBelongsTo, K::kNamespace},
    {K::kService, E::kBelongsTo, K::kNamespace},
    {K::kNamespace, E::kBelongsTo, K::kCluster},
    {K::kNode, E::kBelongsTo, K::kCluster},
    {K::kPod, E::kBelongsTo, K::kLabel},
    {K::kDeployment, E::kBelongsTo, K::kLabel},
    {K::kService, E::kBelongsTo, K::kLabel},
    {K::kNode, E::kBelongsTo, K::kLabel},
};

bool Enabled(const std::map<K, KindPolicy>& policies, K kind) {
  auto it = policies.find(kind);
  return it != policies.end() && it->second.mode != PolicyMode::kDisabled;
}

}  // namespace

std::set<ComponentKind> NeighborKinds(ComponentKind kind, EdgeType edge_type,
                                      Direction direction) {
  std::set<ComponentKind> out;
  for (const auto& r : kResourceModel) {
    if (r.edge != edge_type) continue;
    if (direction != Direction::kIn && r.src == kind) out.insert(r.dst);
    if (direction != Direction::kOut && r.dst == kind) out.insert(r.src);
  }
  return out;
}

int HierarchyRank(ComponentKind kind) {
  switch (kind) {
    case K::kContainer: return 0;
    case K::kPod: return 1;
    case K::kNode: return 2;
    case K::kReplicaSet: return 3;
    case K::kStatefulSet: return 4;
    case K::kDeployment: return 5;
    case K::kService: return 6;
    case K::kNamespace: return 7;
    case K::kCluster: return 8;
    case K::kPort: return 9;
    case K::kLabel: return 10;
  }
  return 11;
}

std::map<ComponentKind, std::set<ComponentKind>> ScoreDependencies(
    const std::map<ComponentKind, KindPolicy>& policies) {
  std::map<K, std::set<K>> deps;
  for (const auto& [kind, policy] : policies) {
    if (policy.mode == PolicyMode::kDisabled) continue;
    auto& mine = deps[kind];
    auto add = [&](E edge, Direction dir) {
      for (K other : NeighborKinds(kind, edge, dir)) {
        if (Enabled(policies, other)) mine.insert(other);
      }
    };
    if (policy.mode == PolicyMode::kAggregator) {
      for (const auto& e : policy.aggregate_edges) add(e.edge_type, e.direction);
    } else {
      for (const auto& f : policy.neighbor_features) {
        if (f.reads_score()) add(f.edge_type, f.direction);
      }
    }
  }
  return deps;
}

std::vector<ComponentKind> EvaluationOrder(const std::map<ComponentKind, KindPolicy>& policies) {
  const auto deps = ScoreDependencies(policies);
  std::set<K> done;
  std::vector<K> order;
  auto by_rank = [](K a, K b) { return HierarchyRank(a) < HierarchyRank(b); };
  while (order.size() < deps.size()) {
    std::vector<K> ready;
    for (const auto& [kind, needs] : deps) {
      if (done.contains(kind)) continue;
      if (std::all_of(needs.begin(), needs.end(), [&](K k) { return done.contains(k); })) {
        ready.push_back(kind);
      }
    }
    if (ready.empty()) {
      // Walk unresolved dependencies from the lowest-ranked pending kind
      // until a kind repeats; that suffix is a cycle.
      std::vector<K> pending;
      for (const auto& [kind, needs] : deps) {
        if (!done.contains(kind)) pending.push_back(kind);
      }
      std::sort(pending.begin(), pending.end(), by_rank);
      std::vector<K> path = {pending.front()};
      while (true) {
        K next = K::kCluster;
        std::vector<K> candidates;
        for (K k : deps.at(path.back())) {
          if (!done.contains(k)) candidates.push_back(k);
        }
        std::sort(candidates.begin(), candidates.end(), by_rank);
        next = candidates.front();
        auto seen = std::find(path.begin(), path.end(), next);
        if (seen != path.end()) {
          std::string text;
          for (auto it = seen; it != path.end(); ++it) text += std::string(KindName(*it)) + " -> ";
          text += KindName(next);
          throw Error(ErrorCode::kCyclicPolicy, text);
        }
        path.push_back(next);
      }
    }
    const K pick = *std::min_element(ready.begin(), ready.end(), by_rank);
    done.insert(pick);
    order.push_back(pick);
  }
  return order;
}

std::string CheckOrder(const std::vector<ComponentKind>& order,
                       const std::map<ComponentKind, KindPolicy>& policies) {
  const auto deps = ScoreDependencies(policies);
  std::set<K> seen;
  for (K kind : order) {
    if (!deps.contains(kind)) {
      return std::string(KindName(kind)) + " has no enabled policy";
    }
    if (!seen.insert(kind).second) return std::string(KindName(kind)) + " listed twice";
    for (K need : deps.at(kind)) {
      if (!seen.contains(need)) {
        return std::string(KindName(kind)) + " must come after " + std::string(KindName(need));
      }
    }
  }
  for (const auto& [kind, needs] : deps) {
    if (!seen.contains(kind)) return std::string(KindName(kind)) + " is missing";
  }
  return "";
}

}  // namespace sentinel::pipeline
