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


// Seeded cluster simulator used as the test substrate for fault scenarios.
//
// Topology: Namespaces and Nodes BELONG_TO the Cluster; each Deployment
// MANAGES one ReplicaSet which MANAGES its Pods; Pods RUN_ON Nodes
// round-robin, BELONG_TO their Namespace and CONTAIN their Containers.
//
// Metrics per tick: every container metric is its baseline plus Gaussian
// noise (clamped at 0); pod metrics are the sums over the pod's containers;
// node cpu_util / mem_util are a fixed system baseline plus the sum of the
// hosted pods' cpu_usage / mem_usage, in cores and bytes. A cpu_hog ramps
// the target pod's CPU to min(1, workers / 32) of the pod CPU limit over
// three ticks. A mem_leak freezes the pod's memory at injection and adds
// workers * leak_bytes_per_worker every tick. Clearing a fault decays the
// pod back to baseline generation over three ticks.

#ifndef SENTINEL_INGESTION_SIMULATOR_H_
#define SENTINEL_INGESTION_SIMULATOR_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentinel/graph/graph_store.h"
#include "sentinel/ingestion/metric_batch.h"

namespace sentinel::ingestion {

struct MetricBaseline {
  double mean = 0.0;
  double stddev = 0.0;
};

struct SimTopologySpec {
  int node_count = 4;
  int namespace_count = 3;
  int deployments_per_namespace = 2;
  int replicas_per_deployment = 2;
  int containers_per_pod = 1;
  // Per-container baselines for cpu_usage, mem_usage, net_rx, net_tx.
  std::map<std::string, MetricBaseline> metric_baselines = DefaultBaselines();
  double tick_interval = 1.0;  // seconds
  std::uint64_t rng_seed = 0;

  double pod_cpu_limit = 1.0;                // cores
  double node_system_cpu = 0.25;             // cores
  double node_system_mem = 1.0e9;            // bytes
  double leak_bytes_per_worker = 16.0 * (1 << 20);  // per tick

  static std::map<std::string, MetricBaseline> DefaultBaselines();
  // Throws kInvalidConfig.
  void Validate() const;
};

nlohmann::json SpecToJson(const SimTopologySpec& spec);
// Overlays keys present in `doc`; unknown keys throw kInvalidConfig.
void ApplySpecJson(const nlohmann::json& doc, SimTopologySpec& spec);

enum class FaultKind { kCpuHog, kMemLeak };

std::string_view FaultKindName(FaultKind kind);    // "cpu_hog", "mem_leak"
FaultKind ParseFaultKind(std::string_view name);   // kInvalidArgument

struct FaultSpec {
  std::string fault_id;  // assigned on injection when empty
  std::string target_pod;
  FaultKind fault_kind = FaultKind::kCpuHog;
  int workers = 32;
  Timestamp started_at = 0.0;
  std::optional<double> duration;  // seconds; unbounded when unset

  bool operator==(const FaultSpec&) const = default;
};

nlohmann::json FaultToJson(const FaultSpec& fault);
// Throws kInvalidArgument naming the offending field.
FaultSpec FaultFromJson(const nlohmann::json& doc);

// Ids produced by the simulator.
struct SimIds {
  static std::string Cluster();
  static std::string Node(int n);
  static std::string Namespace(int ns);
  static std::string Deployment(int ns, int d);
  static std::string ReplicaSet(int ns, int d);
  static std::string Pod(int ns, int d, int r);
  static std::string Container(const std::string& pod, int c);
};

// Thread-safe: ticks and fault commands are serialised by one mutex.
class ClusterSimulator {
 public:
  explicit ClusterSimulator(SimTopologySpec spec);

  // Topology with no metrics set; identical for identical specs.
  graph::GraphSnapshot Topology() const;

  // Advances one tick and returns every container, pod and node metric.
  MetricBatch Tick(Timestamp now);
  // Throws kUnknownTarget, kDuplicateFault (same pod and kind active),
  // kInvalidArgument for workers < 1 or a reused fault id.
  std::string InjectFault(FaultSpec fault);
  // Throws kNotFound for unknown ids.
  void ClearFault(const std::string& fault_id);
  std::vector<FaultSpec> ActiveFaults() const;

  const SimTopologySpec& spec() const { return spec_; }
  const std::vector<std::string>& pods() const { return pods_; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  std::string HostOf(const std::string& pod) const;  // throws kNotFound
  std::uint64_t ticks() const;

 private:
  struct PodState {
    std::string id;
    int node = 0;
    std::vector<std::string> containers;
    // cpu_hog ramp: ticks since injection (active) or since clearing.
    bool hog_active = false;
    double hog_intensity = 0.0;  // target fraction of the CPU limit
    int hog_ticks = 0;
    double hog_level = 0.0;       // current ramp position in [0, 1]
    double hog_cleared_level = 0.0;
    int hog_decay_ticks = -1;     // >= 0 while decaying
    // mem_leak
    bool leak_active = false;
    double leak_per_tick = 0.0;
    std::vector<double> leak_frozen;  // per-container memory at injection
    int leak_ticks = 0;
    std::vector<double> last_mem;     // per-container memory last tick
    std::vector<double> leak_cleared;  // per-container memory at clearing
    int leak_decay_ticks = -1;
  };

  void ClearLocked(const std::string& fault_id);
  void ExpireLocked(Timestamp now);

  SimTopologySpec spec_;
  std::vector<std::string> nodes_;
  std::vector<std::string> pods_;
  std::map<std::string, std::size_t> pod_index_;
  std::vector<PodState> state_;
  std::vector<std::string> metric_order_;  // container metrics, sorted
  std::map<std::string, FaultSpec> faults_;
  std::uint64_t next_fault_ = 1;
  std::uint64_t ticks_ = 0;
  std::mt19937_64 rng_;
  mutable std::mutex mutex_;
};

}  // namespace sentinel::ingestion

#endif  // SENTINEL_INGESTION_SIMULATOR_H_
