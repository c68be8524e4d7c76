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


// Two-lane periodic scheduler for the graph and model ticks.
//
// Each lane runs its task at start, start + interval, ... A lane never
// overlaps itself: after a slow tick the next one starts at
// max(previous due + interval, finish time), so missed ticks are dropped
// rather than queued. The two lanes are independent, so a graph tick may run
// while a retrain is in progress.

#ifndef SENTINEL_PIPELINE_SCHEDULER_H_
#define SENTINEL_PIPELINE_SCHEDULER_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "sentinel/core/types.h"

namespace sentinel::pipeline {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp Now() const = 0;
};

class SystemClock : public Clock {
 public:
  Timestamp Now() const override;
};

// Simulated time; only moves when told to.
class ManualClock : public Clock {
 public:
  explicit ManualClock(Timestamp start = 0.0) : now_(start) {}
  Timestamp Now() const override { return now_.load(); }
  void Set(Timestamp t) { now_.store(t); }
  void Advance(double seconds) { now_.store(now_.load() + seconds); }

 private:
  std::atomic<Timestamp> now_;
};

enum class Lane { kGraph = 0, kModels = 1 };

std::string_view LaneName(Lane lane);

class Scheduler {
 public:
  using Task = std::function<void(Timestamp)>;
  using ErrorHandler = std::function<void(Lane, const std::string&)>;

  // Throws kInvalidArgument unless both intervals are > 0.
  Scheduler(const Clock& clock, double graph_interval_s, double models_interval_s,
            Task graph_task, Task models_task, ErrorHandler on_error = nullptr);
  ~Scheduler();

  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  // Simulated mode: runs, in time order, every tick due in [start, until),
  // moving `clock` to each due time. Graph ticks run before model ticks due
  // at the same instant. Both lanes first fire at `start`.
  void RunSimulated(ManualClock& clock, Timestamp start, Timestamp until);

  // Threaded mode: one thread per lane against the wall clock.
  void Start();
  void Stop();
  bool running() const { return running_.load(); }

  // Runs the lane's task now on the calling thread. Returns false without
  // running when that lane is already busy.
  bool TryRunNow(Lane lane);

  // Changes take effect from each lane's next tick.
  void SetIntervals(double graph_interval_s, double models_interval_s);

  std::uint64_t tick_count(Lane lane) const;

 private:
  struct LaneState {
    Task task;
    double interval = 1.0;
    std::mutex busy;
    std::atomic<std::uint64_t> ticks{0};
    std::thread thread;
  };

  void RunTask(Lane lane, Timestamp at);
  void LaneLoop(Lane lane);
  LaneState& state(Lane lane) { return lanes_[static_cast<int>(lane)]; }

  const Clock& clock_;
  ErrorHandler on_error_;
  LaneState lanes_[2];
  std::mutex control_;
  std::condition_variable wake_;
  std::atomic<bool> running_{false};
  bool stop_ = false;
};

}  // namespace sentinel::pipeline

#endif  // SENTINEL_PIPELINE_SCHEDULER_H_
