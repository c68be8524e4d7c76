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


#ifndef SENTINEL_ENGINE_EVENT_LOG_H_
#define SENTINEL_ENGINE_EVENT_LOG_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <limits>
#include <mutex>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sentinel/core/types.h"

namespace sentinel::engine {

enum class EventKind {
  kScoreUpdate,
  kModelRetrained,
  kFaultInjected,
  kFaultCleared,
  kTickError,
  kConfigUpdated,
};

std::string_view EventKindName(EventKind kind);

struct ApiEvent {
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::kScoreUpdate;
  nlohmann::json payload;
  Timestamp ts = 0.0;

  nlohmann::json ToJson() const;
};

// Bounded, append-only event history with blocking reads. Sequence numbers
// start at 1 and have no gaps.
class EventLog {
 public:
  explicit EventLog(std::size_t capacity = 4096);

  ApiEvent Append(EventKind kind, nlohmann::json payload, Timestamp ts);

  // Retained events with sequence > `after`, oldest first.
  std::vector<ApiEvent> Since(std::uint64_t after,
                              std::size_t limit = std::numeric_limits<std::size_t>::max()) const;
  // Like Since, but waits up to `timeout_s` for at least one event. Returns
  // early (possibly empty) after Close().
  std::vector<ApiEvent> WaitFor(std::uint64_t after, double timeout_s) const;

  std::uint64_t last_sequence() const;
  // Oldest retained sequence; last_sequence() + 1 when empty.
  std::uint64_t first_retained() const;

  void Close();
  bool closed() const;

 private:
  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::size_t capacity_;
  std::deque<ApiEvent> events_;
  std::uint64_t last_ = 0;
  bool closed_ = false;
};

}  // namespace sentinel::engine

#endif  // SENTINEL_ENGINE_EVENT_LOG_H_
