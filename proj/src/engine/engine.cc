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


#include "sentinel/engine/engine.h"

#include "sentinel/graph/snapshot_json.h"
#include "sentinel/ingestion/replay.h"

namespace sentinel::engine {

namespace {

using nlohmann::json;

json NullableNode(const std::optional<graph::GraphNode>& node) {
  return node ? graph::NodeToJson(*node) : json(nullptr);
}

std::optional<graph::GraphNode> FirstOfKind(const std::vector<graph::GraphNode>& nodes,
                                            ComponentKind kind) {
  for (const auto& n : nodes) {
    if (n.kind == kind) return n;
  }
  return std::nullopt;
}

}  // namespace

std::string_view RunModeName(RunMode mode) {
  switch (mode) {
    case RunMode::kSimulate: return "simulate";
    case RunMode::kLive: return "live";
    case RunMode::kReplay: return "replay";
  }
  return "simulate";
}

RunMode ParseRunMode(std::string_view name) {
  if (name == "simulate") return RunMode::kSimulate;
  if (name == "live") return RunMode::kLive;
  if (name == "replay") return RunMode::kReplay;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mode '" + std::string(name) + "' (live, simulate, replay)");
}

Timestamp Engine::EngineClock::Now() const {
  const auto* m = manual.load();
  return m ? m->Now() : system_.Now();
}

Engine::Engine(pipeline::PipelineConfig config, EngineOptions options)
    : options_(std::move(options)),
      config_(std::make_shared<const pipeline::PipelineConfig>(std::move(config))),
      graph_(config_->Schema()),
      observations_(std::max<std::size_t>(config_->max_observations, 1)) {
  if (auto errors = pipeline::ValidateConfig(*config_); !errors.empty()) {
    throw pipeline::ConfigError(std::move(errors));
  }
  const auto& cfg = *config_;
  switch (options_.mode) {
    case RunMode::kSimulate:
      simulator_ = std::make_unique<ingestion::ClusterSimulator>(cfg.simulator);
      graph_.LoadSnapshot(simulator_->Topology());
      break;
    case RunMode::kLive:
      if (cfg.live.topology_file.empty()) {
        throw pipeline::ConfigError(std::vector<pipeline::FieldError>{{"live.topology_file", "required in live mode"}});
      }
      if (cfg.live.prometheus_url.empty()) {
        throw pipeline::ConfigError(std::vector<pipeline::FieldError>{{"live.prometheus_url", "required in live mode"}});
      }
      if (cfg.live.queries.empty()) {
        throw pipeline::ConfigError(std::vector<pipeline::FieldError>{{"live.queries", "at least one query is required"}});
      }
      graph_.LoadSnapshot(graph::ReadSnapshotFile(cfg.live.topology_file));
      break;
    case RunMode::kReplay:
      if (options_.replay_file.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "replay mode needs a replay file");
      }
      replay_ = ingestion::LoadReplay(options_.replay_file);
      if (!cfg.live.topology_file.empty()) {
        graph_.LoadSnapshot(graph::ReadSnapshotFile(cfg.live.topology_file));
      } else {
        graph_.LoadSnapshot(ingestion::ClusterSimulator(cfg.simulator).Topology());
      }
      break;
  }
  scheduler_ = std::make_unique<pipeline::Scheduler>(
      clock_, cfg.update_graph_interval_s, cfg.update_models_interval_s,
      [this](Timestamp now) { GraphTick(now); },
      [this](Timestamp now) { ModelTick(now); },
      // GraphTick reports its own failures; this catches anything else.
      [this](pipeline::Lane lane, const std::string& what) {
        if (lane == pipeline::Lane::kModels) {
          events_.Append(EventKind::kTickError, {{"lane", "models"}, {"detail", what}},
                         clock_.Now());
        }
      });
}

Engine::~Engine() {
  Stop();
  events_.Close();
}

std::shared_ptr<const pipeline::PipelineConfig> Engine::CurrentConfig() const {
  std::lock_guard lock(config_mutex_);
  return config_;
}

pipeline::PipelineConfig Engine::config() const { return *CurrentConfig(); }

json Engine::Ingest(const pipeline::PipelineConfig& config, Timestamp now) {
  json info = {{"source", RunModeName(options_.mode)}};
  std::optional<ingestion::MetricBatch> batch;
  switch (options_.mode) {
    case RunMode::kSimulate:
      batch = simulator_->Tick(now);
      break;
    case RunMode::kLive: {
      ingestion::PrometheusClient client(config.live.prometheus_url,
                                         config.live.scrape_timeout_s);
      const auto scrape = client.Scrape(config.live.queries, now);
      json errors = json::array();
      for (const auto& e : scrape.errors) {
        errors.push_back({{"spec", e.spec_index},
                          {"error", ErrorCodeName(e.code)},
                          {"detail", e.detail}});
      }
      info["scrape_errors"] = std::move(errors);
      batch = scrape.ToBatch(now);
      break;
    }
    case RunMode::kReplay:
      if (replay_next_ < replay_.size()) {
        batch = replay_[replay_next_++];
      }
      info["replay_position"] = replay_next_;
      info["replay_exhausted"] = replay_next_ >= replay_.size();
      break;
  }
  if (batch) {
    const auto applied = ingestion::ApplyMetricBatch(graph_, *batch);
    info["applied"] = applied.applied;
    info["unknown_ids"] = applied.unknown_ids.size();
    info["rejected"] = applied.rejected.size();
  }
  return info;
}

pipeline::TickReport Engine::GraphTick(Timestamp now) {
  const auto cfg = CurrentConfig();
  try {
    auto ingest = Ingest(*cfg, now);
    auto report = pipeline::UpdateGraph(graph_, bundles_, observations_, *cfg, now);
    std::uint64_t tick = 0;
    {
      std::lock_guard lock(state_mutex_);
      last_tick_ = report;
      tick = ++graph_ticks_;
    }
    json kinds = json::array();
    for (const auto& k : report.kinds) {
      json doc = {{"kind", KindName(k.kind)}, {"scored", k.scores.size()},
                  {"bundle_version", k.bundle_version}};
      if (k.error) doc["error"] = {{"error", ErrorCodeName(*k.error)}, {"detail", k.error_detail}};
      if (!k.excluded.empty()) doc["excluded"] = k.excluded.size();
      kinds.push_back(std::move(doc));
    }
    events_.Append(EventKind::kScoreUpdate,
                   {{"tick", tick},
                    {"at", now},
                    {"scores", report.AllScores()},
                    {"kinds", std::move(kinds)},
                    {"ingest", std::move(ingest)}},
                   now);
    return report;
  } catch (const Error& e) {
    events_.Append(EventKind::kTickError,
                   {{"lane", "graph"}, {"error", ErrorCodeName(e.code())}, {"detail", e.detail()}},
                   now);
    throw;
  } catch (const std::exception& e) {
    events_.Append(EventKind::kTickError, {{"lane", "graph"}, {"detail", e.what()}}, now);
    throw;
  }
}

pipeline::ModelUpdateReport Engine::ModelTick(Timestamp now) {
  const auto cfg = CurrentConfig();
  auto report = pipeline::UpdateModels(observations_, bundles_, *cfg, now);
  events_.Append(EventKind::kModelRetrained, report.ToJson(), now);
  return report;
}

void Engine::Start() { scheduler_->Start(); }

void Engine::Stop() {
  if (scheduler_) scheduler_->Stop();
}

void Engine::RunSimulated(pipeline::ManualClock& clock, Timestamp start, Timestamp until) {
  clock_.manual.store(&clock);
  try {
    scheduler_->RunSimulated(clock, start, until);
  } catch (...) {
    clock_.manual.store(nullptr);
    throw;
  }
  clock_.manual.store(nullptr);
}

bool Engine::TriggerGraphTick() { return scheduler_->TryRunNow(pipeline::Lane::kGraph); }
bool Engine::TriggerModelTick() { return scheduler_->TryRunNow(pipeline::Lane::kModels); }

void Engine::ReplaceConfig(pipeline::PipelineConfig config) {
  if (auto errors = pipeline::ValidateConfig(config); !errors.empty()) {
    throw pipeline::ConfigError(std::move(errors));
  }
  auto next = std::make_shared<const pipeline::PipelineConfig>(std::move(config));
  graph_.set_schema(next->Schema());
  observations_.set_capacity(next->max_observations);
  scheduler_->SetIntervals(next->update_graph_interval_s, next->update_models_interval_s);
  {
    std::lock_guard lock(config_mutex_);
    config_ = next;
  }
  events_.Append(EventKind::kConfigUpdated, pipeline::ConfigToJson(*next), clock_.Now());
}

std::string Engine::InjectFault(ingestion::FaultSpec fault) {
  if (!simulator_) {
    throw Error(ErrorCode::kInvalidArgument, "fault injection needs simulate mode");
  }
  const Timestamp now = clock_.Now();
  if (fault.started_at == 0.0) fault.started_at = now;
  const auto id = simulator_->InjectFault(fault);
  for (const auto& f : simulator_->ActiveFaults()) {
    if (f.fault_id == id) {
      events_.Append(EventKind::kFaultInjected, ingestion::FaultToJson(f), now);
      break;
    }
  }
  return id;
}

void Engine::ClearFault(const std::string& fault_id) {
  if (!simulator_) {
    throw Error(ErrorCode::kInvalidArgument, "fault injection needs simulate mode");
  }
  simulator_->ClearFault(fault_id);
  events_.Append(EventKind::kFaultCleared, {{"fault_id", fault_id}}, clock_.Now());
}

std::vector<ingestion::FaultSpec> Engine::ActiveFaults() const {
  return simulator_ ? simulator_->ActiveFaults() : std::vector<ingestion::FaultSpec>{};
}

json Engine::Trace(const std::string& id) const {
  using K = ComponentKind;
  const auto node = graph_.GetNode(id);
  std::optional<graph::GraphNode> pod;
  if (node.kind == K::kPod) {
    pod = node;
  } else if (node.kind == K::kContainer) {
    pod = FirstOfKind(graph_.Neighbors(id, EdgeType::kContains, Direction::kIn), K::kPod);
  }

  std::optional<graph::GraphNode> host, replica_set, deployment, stateful_set, ns;
  json siblings = json::array();
  json containers = json::array();
  if (pod) {
    host = FirstOfKind(graph_.Neighbors(pod->id, EdgeType::kRunsOn, Direction::kOut), K::kNode);
    const auto owners = graph_.Neighbors(pod->id, EdgeType::kManages, Direction::kIn);
    replica_set = FirstOfKind(owners, K::kReplicaSet);
    stateful_set = FirstOfKind(owners, K::kStatefulSet);
    if (replica_set) {
      deployment = FirstOfKind(
          graph_.Neighbors(replica_set->id, EdgeType::kManages, Direction::kIn), K::kDeployment);
    }
    ns = FirstOfKind(graph_.Neighbors(pod->id, EdgeType::kBelongsTo, Direction::kOut),
                     K::kNamespace);
    if (host) {
      for (const auto& p : graph_.Neighbors(host->id, EdgeType::kRunsOn, Direction::kIn)) {
        if (p.kind == K::kPod && p.id != pod->id) siblings.push_back(graph::NodeToJson(p));
      }
    }
    for (const auto& c : graph_.Neighbors(pod->id, EdgeType::kContains, Direction::kOut)) {
      containers.push_back(graph::NodeToJson(c));
    }
  } else {
    ns = FirstOfKind(graph_.Neighbors(id, EdgeType::kBelongsTo, Direction::kOut), K::kNamespace);
    if (node.kind == K::kReplicaSet) {
      deployment =
          FirstOfKind(graph_.Neighbors(id, EdgeType::kManages, Direction::kIn), K::kDeployment);
    }
  }
  if (!ns && deployment) {
    ns = FirstOfKind(graph_.Neighbors(deployment->id, EdgeType::kBelongsTo, Direction::kOut),
                     K::kNamespace);
  }

  json chain = json::array();
  for (const auto* n : {&pod, &replica_set, &stateful_set, &deployment, &ns, &host}) {
    if (*n) chain.push_back((*n)->id);
  }
  return {{"component", graph::NodeToJson(node)},
          {"pod", NullableNode(pod)},
          {"containers", std::move(containers)},
          {"host_node", NullableNode(host)},
          {"replica_set", NullableNode(replica_set)},
          {"stateful_set", NullableNode(stateful_set)},
          {"deployment", NullableNode(deployment)},
          {"namespace", NullableNode(ns)},
          {"siblings", std::move(siblings)},
          {"chain", std::move(chain)}};
}

json Engine::ModelsSummary() const {
  const auto cfg = CurrentConfig();
  json kinds = json::array();
  for (const auto& [kind, policy] : cfg->kinds) {
    if (policy.mode == pipeline::PolicyMode::kDisabled) continue;
    json doc = {{"kind", KindName(kind)}, {"mode", pipeline::PolicyModeName(policy.mode)}};
    if (policy.mode == pipeline::PolicyMode::kModeled) {
      doc["unsupervised"] = models::UnsupervisedName(policy.unsupervised.kind);
      doc["supervised"] = models::SupervisedName(policy.supervised.kind);
      const auto bundle = bundles_.Get(kind);
      doc["bundle"] = bundle ? bundle->Summary() : json(nullptr);
    }
    kinds.push_back(std::move(doc));
  }
  return {{"kinds", std::move(kinds)}};
}

std::optional<pipeline::TickReport> Engine::last_tick() const {
  std::lock_guard lock(state_mutex_);
  return last_tick_;
}

std::uint64_t Engine::graph_ticks() const {
  std::lock_guard lock(state_mutex_);
  return graph_ticks_;
}

}  // namespace sentinel::engine
