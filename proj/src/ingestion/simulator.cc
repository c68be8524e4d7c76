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


#include "sentinel/ingestion/simulator.h"

#include <algorithm>
#include <cmath>

#include "sentinel/core/error.h"

namespace sentinel::ingestion {

using graph::GraphEdge;
using graph::GraphNode;
using nlohmann::json;

namespace {

constexpr int kRampTicks = 3;
constexpr double kSaturationWorkers = 32.0;

}  // namespace

std::map<std::string, MetricBaseline> SimTopologySpec::DefaultBaselines() {
  return {{"cpu_usage", {0.1, 0.01}},
          {"mem_usage", {2.0e8, 4.0e6}},
          {"net_rx", {5.0e4, 2.5e3}},
          {"net_tx", {3.0e4, 1.5e3}}};
}

void SimTopologySpec::Validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw Error(ErrorCode::kInvalidConfig, std::string(name) + " must be >= 1");
  };
  positive(node_count, "node_count");
  positive(namespace_count, "namespace_count");
  positive(deployments_per_namespace, "deployments_per_namespace");
  positive(replicas_per_deployment, "replicas_per_deployment");
  positive(containers_per_pod, "containers_per_pod");
  for (const char* m : {"cpu_usage", "mem_usage", "net_rx", "net_tx"}) {
    auto it = metric_baselines.find(m);
    if (it == metric_baselines.end()) {
      throw Error(ErrorCode::kInvalidConfig, std::string("metric_baselines.") + m + " missing");
    }
    if (!(it->second.stddev >= 0.0) || !std::isfinite(it->second.mean)) {
      throw Error(ErrorCode::kInvalidConfig,
                  std::string("metric_baselines.") + m + ": stddev must be >= 0");
    }
  }
  for (const auto& [m, b] : metric_baselines) {
    if (m != "cpu_usage" && m != "mem_usage" && m != "net_rx" && m != "net_tx") {
      throw Error(ErrorCode::kInvalidConfig, "metric_baselines." + m + ": unknown metric");
    }
  }
  if (!(tick_interval > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tick_interval must be > 0");
  }
  if (!(pod_cpu_limit > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "pod_cpu_limit must be > 0");
  }
  if (!(node_system_cpu >= 0.0) || !(node_system_mem >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "node system baselines must be >= 0");
  }
  if (!(leak_bytes_per_worker > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "leak_bytes_per_worker must be > 0");
  }
}

json SpecToJson(const SimTopologySpec& s) {
  json baselines = json::object();
  for (const auto& [m, b] : s.metric_baselines) {
    baselines[m] = {{"mean", b.mean}, {"stddev", b.stddev}};
  }
  return {{"node_count", s.node_count},
          {"namespace_count", s.namespace_count},
          {"deployments_per_namespace", s.deployments_per_namespace},
          {"replicas_per_deployment", s.replicas_per_deployment},
          {"containers_per_pod", s.containers_per_pod},
          {"metric_baselines", baselines},
          {"tick_interval", s.tick_interval},
          {"rng_seed", s.rng_seed},
          {"pod_cpu_limit", s.pod_cpu_limit},
          {"node_system_cpu", s.node_system_cpu},
          {"node_system_mem", s.node_system_mem},
          {"leak_bytes_per_worker", s.leak_bytes_per_worker}};
}

void ApplySpecJson(const json& doc, SimTopologySpec& spec) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, "simulator must be a table");
  SimTopologySpec next = spec;
  auto as_int = [](const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw Error(ErrorCode::kInvalidConfig, key + ": expected an integer");
    return v.get<int>();
  };
  auto as_double = [](const json& v, const std::string& key) {
    if (!v.is_number()) throw Error(ErrorCode::kInvalidConfig, key + ": expected a number");
    return v.get<double>();
  };
  for (const auto& [key, v] : doc.items()) {
    if (key == "node_count") next.node_count = as_int(v, key);
    else if (key == "namespace_count") next.namespace_count = as_int(v, key);
    else if (key == "deployments_per_namespace") next.deployments_per_namespace = as_int(v, key);
    else if (key == "replicas_per_deployment") next.replicas_per_deployment = as_int(v, key);
    else if (key == "containers_per_pod") next.containers_per_pod = as_int(v, key);
    else if (key == "tick_interval") next.tick_interval = as_double(v, key);
    else if (key == "pod_cpu_limit") next.pod_cpu_limit = as_double(v, key);
    else if (key == "node_system_cpu") next.node_system_cpu = as_double(v, key);
    else if (key == "node_system_mem") next.node_system_mem = as_double(v, key);
    else if (key == "leak_bytes_per_worker") next.leak_bytes_per_worker = as_double(v, key);
    else if (key == "rng_seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw Error(ErrorCode::kInvalidConfig, "rng_seed: expected a non-negative integer");
      }
      next.rng_seed = v.get<std::uint64_t>();
    } else if (key == "metric_baselines") {
      if (!v.is_object()) throw Error(ErrorCode::kInvalidConfig, key + ": expected a table");
      for (const auto& [metric, b] : v.items()) {
        const std::string path = key + "." + metric;
        if (!b.is_object()) throw Error(ErrorCode::kInvalidConfig, path + ": expected a table");
        auto& target = next.metric_baselines[metric];
        for (const auto& [field, fv] : b.items()) {
          if (field == "mean") target.mean = as_double(fv, path + ".mean");
          else if (field == "stddev") target.stddev = as_double(fv, path + ".stddev");
          else throw Error(ErrorCode::kInvalidConfig, path + "." + field + ": unknown key");
        }
      }
    } else {
      throw Error(ErrorCode::kInvalidConfig, key + ": unknown key");
    }
  }
  next.Validate();
  spec = std::move(next);
}

std::string_view FaultKindName(FaultKind kind) {
  return kind == FaultKind::kCpuHog ? "cpu_hog" : "mem_leak";
}

FaultKind ParseFaultKind(std::string_view name) {
  if (name == "cpu_hog" || name == "cpu-hog") return FaultKind::kCpuHog;
  if (name == "mem_leak" || name == "mem-leak") return FaultKind::kMemLeak;
  throw Error(ErrorCode::kInvalidArgument,
              "fault_kind: expected cpu_hog or mem_leak, got '" + std::string(name) + "'");
}

json FaultToJson(const FaultSpec& f) {
  json doc = {{"fault_id", f.fault_id},     {"target_pod", f.target_pod},
              {"fault_kind", FaultKindName(f.fault_kind)}, {"workers", f.workers},
              {"started_at", f.started_at}, {"duration", nullptr}};
  if (f.duration) doc["duration"] = *f.duration;
  return doc;
}

FaultSpec FaultFromJson(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "fault must be an object");
  FaultSpec f;
  auto field = [&](const char* key) -> const json* {
    auto it = doc.find(key);
    return it == doc.end() || it->is_null() ? nullptr : &*it;
  };
  if (const json* v = field("fault_id")) {
    if (!v->is_string()) throw Error(ErrorCode::kInvalidArgument, "fault_id: expected a string");
    f.fault_id = v->get<std::string>();
  }
  const json* target = field("target_pod");
  if (target == nullptr || !target->is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "target_pod: expected a string");
  }
  f.target_pod = target->get<std::string>();
  const json* kind = field("fault_kind");
  if (kind == nullptr || !kind->is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "fault_kind: expected a string");
  }
  f.fault_kind = ParseFaultKind(kind->get<std::string>());
  if (const json* v = field("workers")) {
    if (!v->is_number_integer()) throw Error(ErrorCode::kInvalidArgument, "workers: expected an integer");
    f.workers = v->get<int>();
  }
  if (const json* v = field("started_at")) {
    if (!v->is_number()) throw Error(ErrorCode::kInvalidArgument, "started_at: expected a number");
    f.started_at = v->get<double>();
  }
  if (const json* v = field("duration")) {
    if (!v->is_number() || !(v->get<double>() > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "duration: expected a positive number");
    }
    f.duration = v->get<double>();
  }
  if (f.workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers: must be >= 1");
  return f;
}

std::string SimIds::Cluster() { return "cluster"; }
std::string SimIds::Node(int n) { return "node-" + std::to_string(n); }
std::string SimIds::Namespace(int ns) { return "ns-" + std::to_string(ns); }
std::string SimIds::Deployment(int ns, int d) {
  return Namespace(ns) + ".deploy-" + std::to_string(d);
}
std::string SimIds::ReplicaSet(int ns, int d) { return Deployment(ns, d) + ".rs"; }
std::string SimIds::Pod(int ns, int d, int r) {
  return ReplicaSet(ns, d) + ".pod-" + std::to_string(r);
}
std::string SimIds::Container(const std::string& pod, int c) {
  return pod + ".c-" + std::to_string(c);
}

ClusterSimulator::ClusterSimulator(SimTopologySpec spec)
    : spec_(std::move(spec)), rng_(spec_.rng_seed) {
  spec_.Validate();
  for (int n = 0; n < spec_.node_count; ++n) nodes_.push_back(SimIds::Node(n));
  int global = 0;
  for (int ns = 0; ns < spec_.namespace_count; ++ns) {
    for (int d = 0; d < spec_.deployments_per_namespace; ++d) {
      for (int r = 0; r < spec_.replicas_per_deployment; ++r) {
        PodState pod;
        pod.id = SimIds::Pod(ns, d, r);
        pod.node = global++ % spec_.node_count;
        for (int c = 0; c < spec_.containers_per_pod; ++c) {
          pod.containers.push_back(SimIds::Container(pod.id, c));
        }
        pod_index_[pod.id] = state_.size();
        pods_.push_back(pod.id);
        state_.push_back(std::move(pod));
      }
    }
  }
  for (const auto& [m, b] : spec_.metric_baselines) metric_order_.push_back(m);
}

graph::GraphSnapshot ClusterSimulator::Topology() const {
  graph::GraphSnapshot snap;
  auto node = [&](std::string id, ComponentKind kind, std::string name) {
    GraphNode n;
    n.id = std::move(id);
    n.kind = kind;
    n.name = std::move(name);
    snap.nodes.push_back(std::move(n));
  };
  auto edge = [&](const std::string& src, const std::string& dst, EdgeType type) {
    snap.edges.push_back({src, dst, type, 0.0});
  };
  const std::string cluster = SimIds::Cluster();
  node(cluster, ComponentKind::kCluster, cluster);
  for (int n = 0; n < spec_.node_count; ++n) {
    node(nodes_[n], ComponentKind::kNode, nodes_[n]);
    edge(nodes_[n], cluster, EdgeType::kBelongsTo);
  }
  std::size_t p = 0;
  for (int ns = 0; ns < spec_.namespace_count; ++ns) {
    const std::string ns_id = SimIds::Namespace(ns);
    node(ns_id, ComponentKind::kNamespace, ns_id);
    edge(ns_id, cluster, EdgeType::kBelongsTo);
    for (int d = 0; d < spec_.deployments_per_namespace; ++d) {
      const std::string dep = SimIds::Deployment(ns, d);
      const std::string rs = SimIds::ReplicaSet(ns, d);
      node(dep, ComponentKind::kDeployment, "deploy-" + std::to_string(d));
      node(rs, ComponentKind::kReplicaSet, "deploy-" + std::to_string(d) + "-rs");
      edge(dep, rs, EdgeType::kManages);
      for (int r = 0; r < spec_.replicas_per_deployment; ++r, ++p) {
        const PodState& pod = state_[p];
        node(pod.id, ComponentKind::kPod,
             "deploy-" + std::to_string(d) + "-rs-" + std::to_string(r));
        edge(rs, pod.id, EdgeType::kManages);
        edge(pod.id, nodes_[pod.node], EdgeType::kRunsOn);
        edge(pod.id, ns_id, EdgeType::kBelongsTo);
        for (int c = 0; c < spec_.containers_per_pod; ++c) {
          node(pod.containers[c], ComponentKind::kContainer, "c-" + std::to_string(c));
          edge(pod.id, pod.containers[c], EdgeType::kContains);
        }
      }
    }
  }
  std::sort(snap.nodes.begin(), snap.nodes.end(),
            [](const GraphNode& a, const GraphNode& b) { return a.id < b.id; });
  std::sort(snap.edges.begin(), snap.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.src, a.dst, a.edge_type) < std::tie(b.src, b.dst, b.edge_type);
  });
  return snap;
}

MetricBatch ClusterSimulator::Tick(Timestamp now) {
  std::lock_guard lock(mutex_);
  ExpireLocked(now);
  ++ticks_;
  std::normal_distribution<double> unit(0.0, 1.0);

  const std::size_t m = metric_order_.size();
  std::size_t cpu_col = m, mem_col = m;
  for (std::size_t k = 0; k < m; ++k) {
    if (metric_order_[k] == "cpu_usage") cpu_col = k;
    if (metric_order_[k] == "mem_usage") mem_col = k;
  }

  MetricBatch batch;
  batch.ts = now;
  std::vector<double> node_cpu(nodes_.size(), 0.0);
  std::vector<double> node_mem(nodes_.size(), 0.0);
  std::vector<int> node_pods(nodes_.size(), 0);

  for (auto& pod : state_) {
    const std::size_t nc = pod.containers.size();
    // values[c * m + k]; noise is always drawn so streams stay aligned
    // whatever faults are active.
    std::vector<double> values(nc * m);
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t k = 0; k < m; ++k) {
        const auto& b = spec_.metric_baselines.at(metric_order_[k]);
        values[c * m + k] = std::max(0.0, b.mean + b.stddev * unit(rng_));
      }
    }

    if (pod.leak_active) {
      ++pod.leak_ticks;
      if (pod.leak_frozen.empty()) {
        pod.leak_frozen.resize(nc);
        for (std::size_t c = 0; c < nc; ++c) {
          pod.leak_frozen[c] = pod.last_mem.empty() ? values[c * m + mem_col] : pod.last_mem[c];
        }
      }
      for (std::size_t c = 0; c < nc; ++c) {
        values[c * m + mem_col] =
            pod.leak_frozen[c] +
            (c == 0 ? static_cast<double>(pod.leak_ticks) * pod.leak_per_tick : 0.0);
      }
    } else if (pod.leak_decay_ticks >= 0) {
      ++pod.leak_decay_ticks;
      const double keep =
          std::max(0.0, 1.0 - static_cast<double>(pod.leak_decay_ticks) / kRampTicks);
      for (std::size_t c = 0; c < nc; ++c) {
        double& v = values[c * m + mem_col];
        v += (pod.leak_cleared[c] - v) * keep;
      }
      if (pod.leak_decay_ticks >= kRampTicks) pod.leak_decay_ticks = -1;
    }

    if (pod.hog_active) {
      ++pod.hog_ticks;
      pod.hog_level = std::min(1.0, static_cast<double>(pod.hog_ticks) / kRampTicks);
    } else if (pod.hog_decay_ticks >= 0) {
      ++pod.hog_decay_ticks;
      pod.hog_level = pod.hog_cleared_level *
                      std::max(0.0, 1.0 - static_cast<double>(pod.hog_decay_ticks) / kRampTicks);
      if (pod.hog_decay_ticks >= kRampTicks) {
        pod.hog_decay_ticks = -1;
        pod.hog_level = 0.0;
      }
    }
    if (pod.hog_level > 0.0) {
      double base = 0.0;
      for (std::size_t c = 0; c < nc; ++c) base += values[c * m + cpu_col];
      const double target = pod.hog_intensity * spec_.pod_cpu_limit;
      values[cpu_col] += pod.hog_level * std::max(0.0, target - base);
    }

    pod.last_mem.resize(nc);
    for (std::size_t c = 0; c < nc; ++c) pod.last_mem[c] = values[c * m + mem_col];

    std::vector<double> pod_sum(m, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t k = 0; k < m; ++k) {
        batch.updates.push_back({pod.containers[c], metric_order_[k], values[c * m + k]});
        pod_sum[k] += values[c * m + k];
      }
    }
    for (std::size_t k = 0; k < m; ++k) {
      batch.updates.push_back({pod.id, metric_order_[k], pod_sum[k]});
    }
    node_cpu[pod.node] += pod_sum[cpu_col];
    node_mem[pod.node] += pod_sum[mem_col];
    ++node_pods[pod.node];
  }

  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    batch.updates.push_back({nodes_[n], "cpu_util", spec_.node_system_cpu + node_cpu[n]});
    batch.updates.push_back({nodes_[n], "mem_util", spec_.node_system_mem + node_mem[n]});
    batch.updates.push_back({nodes_[n], "pod_count", static_cast<double>(node_pods[n])});
  }
  return batch;
}

std::string ClusterSimulator::InjectFault(FaultSpec fault) {
  std::lock_guard lock(mutex_);
  auto it = pod_index_.find(fault.target_pod);
  if (it == pod_index_.end()) {
    throw Error(ErrorCode::kUnknownTarget, "no pod '" + fault.target_pod + "' in the simulator");
  }
  if (fault.workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");
  for (const auto& [id, f] : faults_) {
    if (f.target_pod == fault.target_pod && f.fault_kind == fault.fault_kind) {
      throw Error(ErrorCode::kDuplicateFault,
                  std::string(FaultKindName(fault.fault_kind)) + " already active on " +
                      fault.target_pod + " as " + id);
    }
  }
  if (fault.fault_id.empty()) {
    do {
      fault.fault_id = "fault-" + std::to_string(next_fault_++);
    } while (faults_.contains(fault.fault_id));
  } else if (faults_.contains(fault.fault_id)) {
    throw Error(ErrorCode::kInvalidArgument, "fault id '" + fault.fault_id + "' in use");
  }
  PodState& pod = state_[it->second];
  if (fault.fault_kind == FaultKind::kCpuHog) {
    pod.hog_active = true;
    pod.hog_intensity = std::min(1.0, fault.workers / kSaturationWorkers);
    pod.hog_ticks = 0;
    pod.hog_decay_ticks = -1;
  } else {
    pod.leak_active = true;
    pod.leak_per_tick = fault.workers * spec_.leak_bytes_per_worker;
    pod.leak_ticks = 0;
    pod.leak_frozen.clear();
    pod.leak_decay_ticks = -1;
  }
  faults_[fault.fault_id] = fault;
  return fault.fault_id;
}

void ClusterSimulator::ClearFault(const std::string& fault_id) {
  std::lock_guard lock(mutex_);
  ClearLocked(fault_id);
}

void ClusterSimulator::ClearLocked(const std::string& fault_id) {
  auto it = faults_.find(fault_id);
  if (it == faults_.end()) throw Error(ErrorCode::kNotFound, "no fault '" + fault_id + "'");
  PodState& pod = state_[pod_index_.at(it->second.target_pod)];
  if (it->second.fault_kind == FaultKind::kCpuHog) {
    pod.hog_active = false;
    pod.hog_cleared_level = pod.hog_level;
    pod.hog_decay_ticks = pod.hog_level > 0.0 ? 0 : -1;
  } else {
    pod.leak_active = false;
    pod.leak_cleared = pod.last_mem;
    pod.leak_decay_ticks = pod.leak_cleared.empty() ? -1 : 0;
  }
  faults_.erase(it);
}

void ClusterSimulator::ExpireLocked(Timestamp now) {
  std::vector<std::string> expired;
  for (const auto& [id, f] : faults_) {
    if (f.duration && now >= f.started_at + *f.duration) expired.push_back(id);
  }
  for (const auto& id : expired) ClearLocked(id);
}

std::vector<FaultSpec> ClusterSimulator::ActiveFaults() const {
  std::lock_guard lock(mutex_);
  std::vector<FaultSpec> out;
  for (const auto& [id, f] : faults_) out.push_back(f);
  return out;
}

std::string ClusterSimulator::HostOf(const std::string& pod) const {
  auto it = pod_index_.find(pod);
  if (it == pod_index_.end()) throw Error(ErrorCode::kNotFound, pod);
  return nodes_[state_[it->second].node];
}

std::uint64_t ClusterSimulator::ticks() const {
  std::lock_guard lock(mutex_);
  return ticks_;
}

}  // namespace sentinel::ingestion
