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


// The running system: a graph, a metric source, the pipeline state and the
// scheduler, wired together. Both the HTTP service and the CLI drive this.

#ifndef SENTINEL_ENGINE_ENGINE_H_
#define SENTINEL_ENGINE_ENGINE_H_

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentinel/engine/event_log.h"
#include "sentinel/graph/graph_store.h"
#include "sentinel/ingestion/metric_batch.h"
#include "sentinel/ingestion/prometheus.h"
#include "sentinel/ingestion/simulator.h"
#include "sentinel/pipeline/bundle.h"
#include "sentinel/pipeline/config.h"
#include "sentinel/pipeline/observation_store.h"
#include "sentinel/pipeline/scheduler.h"
#include "sentinel/pipeline/update.h"

namespace sentinel::engine {

enum class RunMode { kSimulate, kLive, kReplay };

std::string_view RunModeName(RunMode mode);
RunMode ParseRunMode(std::string_view name);  // kInvalidArgument

struct EngineOptions {
  RunMode mode = RunMode::kSimulate;
  std::string replay_file;  // replay mode
};

class Engine {
 public:
  // Boots the metric source and loads the topology:
  //   simulate - from the config's simulator spec;
  //   live     - from live.topology_file, metrics from Prometheus;
  //   replay   - from live.topology_file when set, else the simulator spec,
  //              metrics from the replay file one batch per graph tick.
  // Throws kInvalidConfig, kNotFound or ParseError.
  Engine(pipeline::PipelineConfig config, EngineOptions options);
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // One graph tick: pull one round of metrics from the source, then score.
  // Emits exactly one score_update, or tick_error when the tick fails (the
  // error is then rethrown).
  pipeline::TickReport GraphTick(Timestamp now);
  // Retrains all modeled kinds; emits one model_retrained.
  pipeline::ModelUpdateReport ModelTick(Timestamp now);

  // Wall-clock scheduling of both ticks.
  void Start();
  void Stop();
  // Simulated scheduling on `clock` over [start, until).
  void RunSimulated(pipeline::ManualClock& clock, Timestamp start, Timestamp until);
  // Run a tick now on the calling thread; false when that tick type is
  // already running.
  bool TriggerGraphTick();
  bool TriggerModelTick();

  pipeline::PipelineConfig config() const;
  // Takes effect from the next tick; emits config_updated. Throws ConfigError.
  void ReplaceConfig(pipeline::PipelineConfig config);

  // Simulate mode only (otherwise kInvalidArgument). Emit fault_injected /
  // fault_cleared.
  std::string InjectFault(ingestion::FaultSpec fault);
  void ClearFault(const std::string& fault_id);
  std::vector<ingestion::FaultSpec> ActiveFaults() const;

  // Context of a component for culprit tracing: host node, owning
  // replica set / deployment / stateful set, namespace, and the other pods
  // on the same node. Throws kNotFound.
  nlohmann::json Trace(const std::string& id) const;
  nlohmann::json ModelsSummary() const;

  RunMode mode() const { return options_.mode; }
  graph::GraphStore& graph() { return graph_; }
  const graph::GraphStore& graph() const { return graph_; }
  pipeline::BundleRegistry& bundles() { return bundles_; }
  pipeline::ObservationStore& observations() { return observations_; }
  EventLog& events() { return events_; }
  ingestion::ClusterSimulator* simulator() { return simulator_.get(); }
  std::optional<pipeline::TickReport> last_tick() const;
  std::uint64_t graph_ticks() const;

 private:
  std::shared_ptr<const pipeline::PipelineConfig> CurrentConfig() const;
  nlohmann::json Ingest(const pipeline::PipelineConfig& config, Timestamp now);

  EngineOptions options_;
  mutable std::mutex config_mutex_;
  std::shared_ptr<const pipeline::PipelineConfig> config_;
  graph::GraphStore graph_;
  pipeline::BundleRegistry bundles_;
  pipeline::ObservationStore observations_;
  EventLog events_;
  std::unique_ptr<ingestion::ClusterSimulator> simulator_;
  std::vector<ingestion::MetricBatch> replay_;
  std::size_t replay_next_ = 0;
  // Delegates to the system clock, or to the manual clock of a simulated run.
  class EngineClock : public pipeline::Clock {
   public:
    Timestamp Now() const override;
    std::atomic<const pipeline::Clock*> manual{nullptr};

   private:
    pipeline::SystemClock system_;
  };

  EngineClock clock_;
  std::unique_ptr<pipeline::Scheduler> scheduler_;
  mutable std::mutex state_mutex_;
  std::optional<pipeline::TickReport> last_tick_;
  std::uint64_t graph_ticks_ = 0;
};

}  // namespace sentinel::engine

#endif  // SENTINEL_ENGINE_ENGINE_H_
