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


#include "sentinel/engine/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "sentinel/engine/engine.h"

namespace sentinel::engine {

namespace {

using nlohmann::json;

double Median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

json Num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Mean score of `id` over the window; NaN when never scored.
double WindowMean(const std::vector<std::map<std::string, double>>& ticks, int from, int to,
                  const std::string& id) {
  std::vector<double> values;
  for (int t = from; t < to; ++t) {
    auto it = ticks[t].find(id);
    if (it != ticks[t].end()) values.push_back(it->second);
  }
  return Mean(values);
}

std::optional<double> ScoreAt(const std::map<std::string, double>& tick, const std::string& id) {
  auto it = tick.find(id);
  return it == tick.end() ? std::nullopt : std::optional<double>(it->second);
}

std::string FirstId(const std::vector<std::string>& ids) { return ids.empty() ? "" : ids[0]; }

}  // namespace

pipeline::PipelineConfig ExperimentConfig(std::uint64_t seed) {
  auto config = pipeline::PipelineConfig::Default();
  config.seed = seed;
  config.simulator.rng_seed = seed;
  config.kinds.at(ComponentKind::kPod).neighbor_features.clear();
  return config;
}

std::string ExperimentName(ingestion::FaultKind fault) {
  return fault == ingestion::FaultKind::kCpuHog ? "cpu-hog" : "mem-leak";
}

ingestion::FaultKind ParseExperimentName(std::string_view name) {
  if (name == "cpu-hog") return ingestion::FaultKind::kCpuHog;
  if (name == "mem-leak") return ingestion::FaultKind::kMemLeak;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown experiment '" + std::string(name) + "' (cpu-hog, mem-leak)");
}

ExperimentResult RunExperiment(const ExperimentOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  auto config = options.config ? *options.config : ExperimentConfig(options.seed);
  Engine engine(config, {RunMode::kSimulate, ""});
  auto& sim = *engine.simulator();
  const double dt = config.simulator.tick_interval;

  const int train_at = options.history_ticks;
  const int inject_at = train_at + options.baseline_ticks;
  const int clear_at = inject_at + options.fault_ticks;
  const int total = clear_at + options.removal_ticks;
  const int steady_from = std::min(inject_at + options.ramp_ticks, clear_at - 1);

  // The culprit and its context.
  const std::string pod = sim.pods().front();
  const std::string node = sim.HostOf(pod);
  auto& g = engine.graph();
  const auto rs = FirstId(g.NeighborIds(pod, EdgeType::kManages, Direction::kIn));
  const auto deploy =
      rs.empty() ? "" : FirstId(g.NeighborIds(rs, EdgeType::kManages, Direction::kIn));
  std::string ns;
  for (const auto& n : g.Neighbors(pod, EdgeType::kBelongsTo, Direction::kOut)) {
    if (n.kind == ComponentKind::kNamespace) ns = n.id;
  }
  std::vector<std::string> siblings;
  for (const auto& p : g.Neighbors(node, EdgeType::kRunsOn, Direction::kIn)) {
    if (p.kind == ComponentKind::kPod && p.id != pod) siblings.push_back(p.id);
  }
  // Scored components of the namespace: its pods, their containers and
  // owners.
  std::set<std::string> ns_components;
  for (const auto& p : g.Neighbors(ns, EdgeType::kBelongsTo, Direction::kIn)) {
    if (p.kind != ComponentKind::kPod) continue;
    ns_components.insert(p.id);
    for (const auto& c : g.NeighborIds(p.id, EdgeType::kContains, Direction::kOut)) {
      ns_components.insert(c);
    }
    for (const auto& owner : g.NeighborIds(p.id, EdgeType::kManages, Direction::kIn)) {
      ns_components.insert(owner);
      for (const auto& top : g.NeighborIds(owner, EdgeType::kManages, Direction::kIn)) {
        ns_components.insert(top);
      }
    }
  }

  std::vector<std::map<std::string, double>> ticks;
  json series = json::array();
  json models = json::array();
  std::string fault_id;
  for (int t = 0; t < total; ++t) {
    const Timestamp now = t * dt;
    if (t == train_at) {
      const auto update = engine.ModelTick(now);
      for (const auto& k : update.kinds) {
        models.push_back({{"kind", KindName(k.kind)},
                          {"status", pipeline::TrainingStatusName(k.status)},
                          {"version", k.version},
                          {"training_rows", k.rows},
                          {"labeled_anomalies", k.labeled_anomalies},
                          {"synthetic_outliers", k.synthetic_outliers}});
      }
    }
    if (t == inject_at) {
      ingestion::FaultSpec fault;
      fault.target_pod = pod;
      fault.fault_kind = options.fault;
      fault.workers = options.workers;
      fault.started_at = now;
      fault_id = engine.InjectFault(fault);
    }
    if (t == clear_at) engine.ClearFault(fault_id);

    const auto report = engine.GraphTick(now);
    ticks.push_back(report.AllScores());
    if (t < train_at) continue;
    const auto& scores = ticks.back();
    std::vector<double> sib;
    for (const auto& s : siblings) {
      if (auto v = ScoreAt(scores, s)) sib.push_back(*v);
    }
    auto opt = [](std::optional<double> v) { return v ? json(*v) : json(nullptr); };
    const char* phase = t < inject_at ? "baseline"
                        : t < clear_at  ? "fault"
                                        : "removal";
    series.push_back({{"tick", t},
                      {"phase", phase},
                      {"node_score", opt(ScoreAt(scores, node))},
                      {"culprit_score", opt(ScoreAt(scores, pod))},
                      {"sibling_median", Num(Median(sib))},
                      {"replica_set_score", opt(ScoreAt(scores, rs))},
                      {"deployment_score", opt(ScoreAt(scores, deploy))},
                      {"namespace_score", opt(ScoreAt(scores, ns))}});
    if (options.realtime) {
      std::this_thread::sleep_for(std::chrono::duration<double>(dt));
    }
  }

  auto node_series = [&](int from, int to) {
    std::vector<double> v;
    for (int t = from; t < to; ++t) v.push_back(ScoreAt(ticks[t], node).value_or(std::nan("")));
    return v;
  };
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };

  // (a) baseline
  const auto baseline = node_series(train_at, inject_at);
  const double baseline_max =
      finite(baseline) && !baseline.empty() ? *std::max_element(baseline.begin(), baseline.end())
                                            : std::nan("");
  const double baseline_mean = finite(baseline) ? Mean(baseline) : std::nan("");
  // (b) peak during the fault
  const auto during = node_series(inject_at, clear_at);
  double peak = std::nan("");
  for (double v : during) {
    if (std::isfinite(v)) peak = std::isfinite(peak) ? std::max(peak, v) : v;
  }
  // (c) culprit vs siblings, steady-state window
  const double culprit = WindowMean(ticks, steady_from, clear_at, pod);
  std::vector<double> sibling_means;
  for (const auto& s : siblings) {
    const double m = WindowMean(ticks, steady_from, clear_at, s);
    if (std::isfinite(m)) sibling_means.push_back(m);
  }
  const double sibling_median = Median(sibling_means);
  // (d) owners vs the namespace's components
  std::vector<double> component_means;
  for (const auto& c : ns_components) {
    const double m = WindowMean(ticks, steady_from, clear_at, c);
    if (std::isfinite(m)) component_means.push_back(m);
  }
  const double ns_median = Median(component_means);
  const double ns_score = WindowMean(ticks, steady_from, clear_at, ns);
  const double rs_score = WindowMean(ticks, steady_from, clear_at, rs);
  const double deploy_score = WindowMean(ticks, steady_from, clear_at, deploy);
  // (e) recovery: first tick after which the node stays below 0.5.
  const auto after = node_series(clear_at, total);
  std::optional<int> recovered;
  for (int i = static_cast<int>(after.size()) - 1; i >= 0; --i) {
    if (!(std::isfinite(after[i]) && after[i] < 0.5)) break;
    recovered = i;
  }
  const double post_removal = after.empty() ? std::nan("") : after.back();

  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  json checks = json::array();
  bool pass = true;
  auto check = [&](const char* id, const char* name, bool ok, json value, json threshold) {
    checks.push_back({{"id", id},
                      {"name", name},
                      {"passed", ok},
                      {"value", std::move(value)},
                      {"threshold", std::move(threshold)}});
    pass = pass && ok;
  };
  check("a", "baseline_node_score_below_0.5", std::isfinite(baseline_max) && baseline_max < 0.5,
        Num(baseline_max), 0.5);
  check("b", "fault_node_score_at_least_0.9", std::isfinite(peak) && peak >= 0.9, Num(peak), 0.9);
  const bool ratio_ok = std::isfinite(culprit) && std::isfinite(sibling_median) &&
                        culprit >= 10.0 * sibling_median && culprit > sibling_median;
  check("c", "culprit_at_least_10x_sibling_median", ratio_ok,
        {{"culprit", Num(culprit)}, {"sibling_median", Num(sibling_median)}}, 10.0);
  const bool owners_ok = std::isfinite(ns_median) && std::isfinite(ns_score) &&
                         std::isfinite(rs_score) && std::isfinite(deploy_score) &&
                         ns_score > ns_median && rs_score > ns_median &&
                         deploy_score > ns_median;
  check("d", "owners_above_namespace_median", owners_ok,
        {{"namespace", Num(ns_score)},
         {"replica_set", Num(rs_score)},
         {"deployment", Num(deploy_score)},
         {"namespace_median", Num(ns_median)}},
        nullptr);
  check("e", "node_recovers_within_window",
        recovered.has_value() && *recovered < options.recovery_window,
        recovered ? json(*recovered + 1) : json(nullptr), options.recovery_window);
  check("runtime", "runtime_within_budget", runtime <= options.max_runtime_s, runtime,
        options.max_runtime_s);

  json report = {
      {"schema_version", 1},
      {"experiment", ExperimentName(options.fault)},
      {"seed", options.seed},
      {"topology",
       {{"nodes", config.simulator.node_count},
        {"namespaces", config.simulator.namespace_count},
        {"deployments_per_namespace", config.simulator.deployments_per_namespace},
        {"replicas_per_deployment", config.simulator.replicas_per_deployment},
        {"containers_per_pod", config.simulator.containers_per_pod},
        {"tick_interval_s", dt}}},
      {"culprit",
       {{"pod", pod},
        {"node", node},
        {"replica_set", rs},
        {"deployment", deploy},
        {"namespace", ns},
        {"siblings", siblings},
        {"workers", options.workers}}},
      {"timeline",
       {{"history_ticks", options.history_ticks},
        {"model_tick", train_at},
        {"fault_injected", inject_at},
        {"steady_from", steady_from},
        {"fault_cleared", clear_at},
        {"ticks", total}}},
      {"models", std::move(models)},
      {"metrics",
       {{"baseline_node_score_max", Num(baseline_max)},
        {"baseline_node_score_mean", Num(baseline_mean)},
        {"peak_node_score", Num(peak)},
        {"culprit_score", Num(culprit)},
        {"sibling_median", Num(sibling_median)},
        {"culprit_ratio",
         Num(sibling_median > 0.0 ? culprit / sibling_median : std::nan(""))},
        {"namespace_score", Num(ns_score)},
        {"replica_set_score", Num(rs_score)},
        {"deployment_score", Num(deploy_score)},
        {"namespace_median", Num(ns_median)},
        {"recovery_ticks", recovered ? json(*recovered + 1) : json(nullptr)},
        {"post_removal_node_score", Num(post_removal)}}},
      {"series", std::move(series)},
      {"checks", std::move(checks)},
      {"pass", pass},
      {"runtime_s", runtime},
  };
  return {std::move(report), pass};
}

}  // namespace sentinel::engine
