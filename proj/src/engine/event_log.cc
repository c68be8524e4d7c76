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


#include "sentinel/engine/event_log.h"

#include <chrono>

#include "sentinel/core/error.h"

namespace sentinel::engine {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kScoreUpdate: return "score_update";
    case EventKind::kModelRetrained: return "model_retrained";
    case EventKind::kFaultInjected: return "fault_injected";
    case EventKind::kFaultCleared: return "fault_cleared";
    case EventKind::kTickError: return "tick_error";
    case EventKind::kConfigUpdated: return "config_updated";
  }
  return "tick_error";
}

nlohmann::json ApiEvent::ToJson() const {
  return {{"sequence", sequence}, {"event_kind", EventKindName(kind)}, {"ts", ts},
          {"payload", payload}};
}

EventLog::EventLog(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::kInvalidArgument, "capacity must be >= 1");
}

ApiEvent EventLog::Append(EventKind kind, nlohmann::json payload, Timestamp ts) {
  ApiEvent event;
  {
    std::lock_guard lock(mutex_);
    event = {++last_, kind, std::move(payload), ts};
    events_.push_back(event);
    while (events_.size() > capacity_) events_.pop_front();
  }
  changed_.notify_all();
  return event;
}

std::vector<ApiEvent> EventLog::Since(std::uint64_t after, std::size_t limit) const {
  std::lock_guard lock(mutex_);
  std::vector<ApiEvent> out;
  if (events_.empty() || after >= last_) return out;
  const std::uint64_t first = events_.front().sequence;
  std::size_t start = after < first ? 0 : static_cast<std::size_t>(after + 1 - first);
  for (std::size_t i = start; i < events_.size() && out.size() < limit; ++i) {
    out.push_back(events_[i]);
  }
  return out;
}

std::vector<ApiEvent> EventLog::WaitFor(std::uint64_t after, double timeout_s) const {
  {
    std::unique_lock lock(mutex_);
    changed_.wait_for(lock, std::chrono::duration<double>(timeout_s),
                      [&] { return closed_ || last_ > after; });
  }
  return Since(after);
}

std::uint64_t EventLog::last_sequence() const {
  std::lock_guard lock(mutex_);
  return last_;
}

std::uint64_t EventLog::first_retained() const {
  std::lock_guard lock(mutex_);
  return events_.empty() ? last_ + 1 : events_.front().sequence;
}

void EventLog::Close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  changed_.notify_all();
}

bool EventLog::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

}  // namespace sentinel::engine
