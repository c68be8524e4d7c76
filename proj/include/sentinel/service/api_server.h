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


// HTTP facade over an Engine: graph queries, pipeline triggers, config,
// simulator faults and the server-sent event stream.

#ifndef SENTINEL_SERVICE_API_SERVER_H_
#define SENTINEL_SERVICE_API_SERVER_H_

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "json.hpp"
#include "sentinel/core/error.h"
#include "sentinel/engine/engine.h"

namespace httplib {
class Server;
}

namespace sentinel::service {

struct ApiServerOptions {
  // Seconds an idle event stream waits before sending a keep-alive comment.
  double keepalive_s = 15.0;
};

// HTTP status for a library error code.
int StatusFor(ErrorCode code);
// {"error": <code>, "detail": <detail>}
nlohmann::json ErrorBody(std::string_view error, std::string_view detail);

// Splits "host:port" (or ":port", or "port"). Throws kInvalidArgument.
std::pair<std::string, int> ParseListenAddress(std::string_view address);

class ApiServer {
 public:
  explicit ApiServer(engine::Engine& engine, ApiServerOptions options = {});
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port. Throws kInvalidArgument when binding fails.
  int Start(const std::string& host, int port);
  // Serves on the calling thread until Stop(). False when binding fails.
  bool Listen(const std::string& host, int port);
  void Stop();

  bool running() const;

 private:
  void Routes();

  engine::Engine& engine_;
  ApiServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  std::atomic<bool> stopping_{false};
};

}  // namespace sentinel::service

#endif  // SENTINEL_SERVICE_API_SERVER_H_
