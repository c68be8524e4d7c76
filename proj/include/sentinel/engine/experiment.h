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


// Scripted fault scenarios on the simulator: a baseline phase, a fault
// injected on one pod, and its removal, with checks on how the scores of the
// pod, its host node and its owners respond.

#ifndef SENTINEL_ENGINE_EXPERIMENT_H_
#define SENTINEL_ENGINE_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "sentinel/ingestion/simulator.h"
#include "sentinel/pipeline/config.h"

namespace sentinel::engine {

struct ExperimentOptions {
  ingestion::FaultKind fault = ingestion::FaultKind::kCpuHog;
  std::uint64_t seed = 0;
  // Unscored warm-up that fills the observation stores before the model
  // tick. Fewer rows leave too few labeled tail points for the tree to
  // extrapolate from.
  int history_ticks = 600;
  int baseline_ticks = 20;  // scored baseline after training
  int fault_ticks = 15;
  int removal_ticks = 15;
  int ramp_ticks = 3;       // fault ticks excluded from the steady-state window
  int recovery_window = 5;  // graph ticks allowed to fall back below 0.5
  int workers = 32;
  double max_runtime_s = 30.0;
  // Pace ticks at the simulator's tick_interval of wall time.
  bool realtime = false;
  // Defaults to ExperimentConfig(seed).
  std::optional<pipeline::PipelineConfig> config;
};

// Default pipeline config with every seed set from `seed`, except that pods
// are modeled on their own metrics: with the host-node neighbor features a
// node-wide fault raises the scores of every pod on that node.
pipeline::PipelineConfig ExperimentConfig(std::uint64_t seed);

std::string ExperimentName(ingestion::FaultKind fault);  // "cpu-hog", "mem-leak"
ingestion::FaultKind ParseExperimentName(std::string_view name);  // kInvalidArgument

struct ExperimentResult {
  nlohmann::json report;
  bool pass = false;
};

ExperimentResult RunExperiment(const ExperimentOptions& options);

}  // namespace sentinel::engine

#endif  // SENTINEL_ENGINE_EXPERIMENT_H_
