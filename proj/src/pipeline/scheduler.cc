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


#include "sentinel/pipeline/scheduler.h"

#include <algorithm>
#include <chrono>

#include "sentinel/core/error.h"

namespace sentinel::pipeline {

namespace {

void CheckInterval(double s, const char* name) {
  if (!(s > 0.0)) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be > 0");
}

}  // namespace

Timestamp SystemClock::Now() const {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string_view LaneName(Lane lane) { return lane == Lane::kGraph ? "graph" : "models"; }

Scheduler::Scheduler(const Clock& clock, double graph_interval_s, double models_interval_s,
                     Task graph_task, Task models_task, ErrorHandler on_error)
    : clock_(clock), on_error_(std::move(on_error)) {
  CheckInterval(graph_interval_s, "graph interval");
  CheckInterval(models_interval_s, "models interval");
  lanes_[0].task = std::move(graph_task);
  lanes_[0].interval = graph_interval_s;
  lanes_[1].task = std::move(models_task);
  lanes_[1].interval = models_interval_s;
}

Scheduler::~Scheduler() { Stop(); }

void Scheduler::RunTask(Lane lane, Timestamp at) {
  auto& s = state(lane);
  try {
    s.task(at);
  } catch (const std::exception& e) {
    if (on_error_) on_error_(lane, e.what());
  }
  s.ticks.fetch_add(1);
}

void Scheduler::RunSimulated(ManualClock& clock, Timestamp start, Timestamp until) {
  Timestamp next[2] = {start, start};
  while (true) {
    const int lane = next[0] <= next[1] ? 0 : 1;
    const Timestamp due = next[lane];
    if (!(due < until)) break;
    clock.Set(std::max(clock.Now(), due));
    {
      std::lock_guard busy(lanes_[lane].busy);
      RunTask(static_cast<Lane>(lane), clock.Now());
    }
    std::lock_guard lock(control_);
    next[lane] = std::max(due + lanes_[lane].interval, clock.Now());
  }
}

void Scheduler::LaneLoop(Lane lane) {
  auto& s = state(lane);
  Timestamp next = clock_.Now();
  while (true) {
    {
      std::unique_lock lock(control_);
      while (!stop_) {
        const double wait = next - clock_.Now();
        if (wait <= 0.0) break;
        wake_.wait_for(lock, std::chrono::duration<double>(std::min(wait, 0.25)));
      }
      if (stop_) return;
    }
    {
      std::lock_guard busy(s.busy);
      RunTask(lane, clock_.Now());
    }
    std::lock_guard lock(control_);
    next = std::max(next + s.interval, clock_.Now());
  }
}

void Scheduler::Start() {
  std::lock_guard lock(control_);
  if (running_.load()) return;
  stop_ = false;
  running_.store(true);
  lanes_[0].thread = std::thread([this] { LaneLoop(Lane::kGraph); });
  lanes_[1].thread = std::thread([this] { LaneLoop(Lane::kModels); });
}

void Scheduler::Stop() {
  {
    std::lock_guard lock(control_);
    if (!running_.load()) return;
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& s : lanes_) {
    if (s.thread.joinable()) s.thread.join();
  }
  running_.store(false);
}

bool Scheduler::TryRunNow(Lane lane) {
  auto& s = state(lane);
  std::unique_lock busy(s.busy, std::try_to_lock);
  if (!busy.owns_lock()) return false;
  RunTask(lane, clock_.Now());
  return true;
}

void Scheduler::SetIntervals(double graph_interval_s, double models_interval_s) {
  CheckInterval(graph_interval_s, "graph interval");
  CheckInterval(models_interval_s, "models interval");
  std::lock_guard lock(control_);
  lanes_[0].interval = graph_interval_s;
  lanes_[1].interval = models_interval_s;
}

std::uint64_t Scheduler::tick_count(Lane lane) const {
  return lanes_[static_cast<int>(lane)].ticks.load();
}

}  // namespace sentinel::pipeline
