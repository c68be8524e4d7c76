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


#include "sentinel/service/api_server.h"

#include <charconv>
#include <chrono>
#include <optional>
#include <set>

#include "httplib.h"
#include "sentinel/graph/snapshot_json.h"
#include "sentinel/pipeline/config.h"

namespace sentinel::service {

namespace {

using nlohmann::json;

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, std::string_view error,
               std::string_view detail) {
  SendJson(res, status, ErrorBody(error, detail));
}

void SendError(httplib::Response& res, const Error& e) {
  json body = ErrorBody(ErrorCodeName(e.code()), e.detail());
  if (const auto* config = dynamic_cast<const pipeline::ConfigError*>(&e)) {
    json fields = json::array();
    for (const auto& f : config->fields()) {
      fields.push_back({{"field", f.field}, {"message", f.message}});
    }
    body["fields"] = std::move(fields);
  }
  SendJson(res, StatusFor(e.code()), body);
}

std::optional<json> ParseBody(const httplib::Request& req, httplib::Response& res) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    SendError(res, 400, "ParseError", e.what());
    return std::nullopt;
  }
}

std::optional<std::uint64_t> ParseSequence(const std::string& text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string SseFrame(const engine::ApiEvent& event) {
  return "id: " + std::to_string(event.sequence) + "\nevent: " +
         std::string(engine::EventKindName(event.kind)) + "\ndata: " +
         event.ToJson().dump() + "\n\n";
}

// Wraps a handler so library errors become the uniform error body.
template <typename F>
httplib::Server::Handler Guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      SendError(res, e);
    } catch (const std::exception& e) {
      SendError(res, 500, "Internal", e.what());
    }
  };
}

}  // namespace

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownTarget:
      return 404;
    case ErrorCode::kDuplicateFault:
      return 409;
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kCyclicPolicy:
      return 422;
    case ErrorCode::kUnknownKind:
    case ErrorCode::kUndeclaredMetric:
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kOutOfRange:
      return 400;
    default:
      return 500;
  }
}

json ErrorBody(std::string_view error, std::string_view detail) {
  return {{"error", error}, {"detail", detail}};
}

std::pair<std::string, int> ParseListenAddress(std::string_view address) {
  std::string host = "127.0.0.1";
  std::string_view port_text = address;
  if (auto colon = address.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = std::string(address.substr(0, colon));
    port_text = address.substr(colon + 1);
  }
  int port = -1;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port < 0 ||
      port > 65535) {
    throw Error(ErrorCode::kInvalidArgument,
                "listen address '" + std::string(address) + "': expected host:port");
  }
  return {host, port};
}

ApiServer::ApiServer(engine::Engine& engine, ApiServerOptions options)
    : engine_(engine), options_(options), http_(std::make_unique<httplib::Server>()) {
  Routes();
}

ApiServer::~ApiServer() { Stop(); }

int ApiServer::Start(const std::string& host, int port) {
  stopping_ = false;
  const int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return bound;
}

bool ApiServer::Listen(const std::string& host, int port) {
  stopping_ = false;
  return http_->listen(host, port);
}

void ApiServer::Stop() {
  stopping_ = true;
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

bool ApiServer::running() const { return http_->is_running(); }

void ApiServer::Routes() {
  auto& s = *http_;

  s.Get("/api/status", Guarded([this](const httplib::Request&, httplib::Response& res) {
    SendJson(res, 200,
             {{"mode", engine::RunModeName(engine_.mode())},
              {"graph_ticks", engine_.graph_ticks()},
              {"last_event", engine_.events().last_sequence()},
              {"nodes", engine_.graph().node_count()},
              {"edges", engine_.graph().edge_count()}});
  }));

  s.Get("/api/graph", Guarded([this](const httplib::Request&, httplib::Response& res) {
    SendJson(res, 200, graph::SnapshotToJson(engine_.graph().Snapshot()));
  }));

  s.Get(R"(/api/components/([^/]+))",
        Guarded([this](const httplib::Request& req, httplib::Response& res) {
          const std::string name = req.matches[1];
          const auto kind = TryParseKind(name);
          if (!kind) {
            SendError(res, 400, "UnknownKind", "unknown component kind '" + name + "'");
            return;
          }
          json items = json::array();
          for (const auto& node : engine_.graph().NodesOfKind(*kind)) {
            items.push_back(graph::NodeToJson(node));
          }
          SendJson(res, 200, {{"kind", KindName(*kind)}, {"components", std::move(items)}});
        }));

  s.Get(R"(/api/component/([^/]+))",
        Guarded([this](const httplib::Request& req, httplib::Response& res) {
          SendJson(res, 200, graph::NodeToJson(engine_.graph().GetNode(req.matches[1])));
        }));

  s.Get(R"(/api/component/([^/]+)/neighbors)",
        Guarded([this](const httplib::Request& req, httplib::Response& res) {
          const std::string id = req.matches[1];
          auto& g = engine_.graph();
          if (!g.Contains(id)) throw Error(ErrorCode::kNotFound, "no component '" + id + "'");
          std::vector<EdgeType> types(kAllEdgeTypes.begin(), kAllEdgeTypes.end());
          if (req.has_param("edge")) types = {ParseEdgeType(req.get_param_value("edge"))};
          const Direction direction = req.has_param("direction")
                                          ? ParseDirection(req.get_param_value("direction"))
                                          : Direction::kBoth;
          json items = json::array();
          for (EdgeType type : types) {
            for (const auto& node : g.Neighbors(id, type, direction)) {
              json doc = graph::NodeToJson(node);
              doc["edge_type"] = EdgeTypeName(type);
              items.push_back(std::move(doc));
            }
          }
          SendJson(res, 200,
                   {{"id", id},
                    {"direction", DirectionName(direction)},
                    {"neighbors", std::move(items)}});
        }));

  s.Get(R"(/api/component/([^/]+)/trace)",
        Guarded([this](const httplib::Request& req, httplib::Response& res) {
          SendJson(res, 200, engine_.Trace(req.matches[1]));
        }));

  // Runs a tick on the request thread and answers with the event it emitted.
  auto trigger = [this](engine::EventKind done, const char* lane, auto run) {
    return Guarded([this, done, lane, run](const httplib::Request&, httplib::Response& res) {
      const auto before = engine_.events().last_sequence();
      if (!run()) {
        SendError(res, 409, "TickRunning", std::string(lane) + " tick already running");
        return;
      }
      for (const auto& e : engine_.events().Since(before)) {
        if (e.kind == done) {
          SendJson(res, 200, e.ToJson());
          return;
        }
        if (e.kind == engine::EventKind::kTickError && e.payload.value("lane", "") == lane) {
          SendJson(res, 500,
                   ErrorBody(e.payload.value("error", "TickError"),
                             e.payload.value("detail", "")));
          return;
        }
      }
      SendError(res, 500, "TickError", std::string(lane) + " tick produced no event");
    });
  };
  s.Post("/api/pipeline/update-graph",
         trigger(engine::EventKind::kScoreUpdate, "graph",
                 [this] { return engine_.TriggerGraphTick(); }));
  s.Post("/api/pipeline/update-models",
         trigger(engine::EventKind::kModelRetrained, "models",
                 [this] { return engine_.TriggerModelTick(); }));

  s.Get("/api/config", Guarded([this](const httplib::Request&, httplib::Response& res) {
    SendJson(res, 200, pipeline::ConfigToJson(engine_.config()));
  }));
  s.Put("/api/config", Guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto body = ParseBody(req, res);
    if (!body) return;
    engine_.ReplaceConfig(pipeline::ConfigFromJson(*body));
    SendJson(res, 200, pipeline::ConfigToJson(engine_.config()));
  }));

  auto simulate_only = [this](httplib::Response& res) {
    if (engine_.mode() == engine::RunMode::kSimulate) return true;
    SendError(res, 405, "ModeNotSupported",
              "fault control needs simulate mode, server runs in " +
                  std::string(engine::RunModeName(engine_.mode())) + " mode");
    return false;
  };
  s.Get("/api/simulator/faults",
        Guarded([this, simulate_only](const httplib::Request&, httplib::Response& res) {
          if (!simulate_only(res)) return;
          json items = json::array();
          for (const auto& f : engine_.ActiveFaults()) items.push_back(ingestion::FaultToJson(f));
          SendJson(res, 200, {{"faults", std::move(items)}});
        }));
  s.Post("/api/simulator/fault",
         Guarded([this, simulate_only](const httplib::Request& req, httplib::Response& res) {
           if (!simulate_only(res)) return;
           auto body = ParseBody(req, res);
           if (!body) return;
           const auto id = engine_.InjectFault(ingestion::FaultFromJson(*body));
           SendJson(res, 201, {{"fault_id", id}});
         }));
  s.Delete(R"(/api/simulator/fault/([^/]+))",
           Guarded([this, simulate_only](const httplib::Request& req, httplib::Response& res) {
             if (!simulate_only(res)) return;
             engine_.ClearFault(req.matches[1]);
             res.status = 204;
           }));

  s.Get("/api/models", Guarded([this](const httplib::Request&, httplib::Response& res) {
    SendJson(res, 200, engine_.ModelsSummary());
  }));

  // Server-sent events. Resumes after Last-Event-ID (or ?last_event_id=);
  // ?max_events=N closes the stream after N events.
  s.Get("/api/events", [this](const httplib::Request& req, httplib::Response& res) {
    std::string resume = req.get_header_value("Last-Event-ID");
    if (resume.empty() && req.has_param("last_event_id")) {
      resume = req.get_param_value("last_event_id");
    }
    std::uint64_t after = 0;
    if (!resume.empty()) {
      auto parsed = ParseSequence(resume);
      if (!parsed) {
        SendError(res, 400, "InvalidArgument", "Last-Event-ID must be a sequence number");
        return;
      }
      after = *parsed;
    }
    std::optional<std::uint64_t> max_events;
    if (req.has_param("max_events")) {
      max_events = ParseSequence(req.get_param_value("max_events"));
      if (!max_events || *max_events == 0) {
        SendError(res, 400, "InvalidArgument", "max_events must be a positive integer");
        return;
      }
    }
    res.set_header("Cache-Control", "no-cache");
    auto cursor = std::make_shared<std::uint64_t>(after);
    auto sent = std::make_shared<std::uint64_t>(0);
    auto idle = std::make_shared<double>(0.0);
    res.set_chunked_content_provider(
        "text/event-stream",
        [this, cursor, sent, idle, max_events](std::size_t, httplib::DataSink& sink) {
          constexpr double kPoll = 0.25;
          auto& log = engine_.events();
          if (*sent == 0 && *cursor + 1 < log.first_retained()) {
            // The client asked for events that are no longer retained.
            const std::string gap = ": gap " + std::to_string(*cursor + 1) + "-" +
                                    std::to_string(log.first_retained() - 1) + "\n\n";
            if (!sink.write(gap.data(), gap.size())) return false;
          }
          while (!stopping_ && !log.closed() && sink.is_writable()) {
            const auto limit = max_events ? *max_events - *sent : std::size_t(-1);
            auto batch = log.WaitFor(*cursor, kPoll);
            if (batch.size() > limit) batch.resize(limit);
            if (batch.empty()) {
              *idle += kPoll;
              if (*idle >= options_.keepalive_s) {
                *idle = 0.0;
                static constexpr char kPing[] = ": keep-alive\n\n";
                if (!sink.write(kPing, sizeof(kPing) - 1)) return false;
              }
              continue;
            }
            *idle = 0.0;
            for (const auto& event : batch) {
              const auto frame = SseFrame(event);
              if (!sink.write(frame.data(), frame.size())) return false;
              *cursor = event.sequence;
              ++*sent;
            }
            if (max_events && *sent >= *max_events) break;
          }
          sink.done();
          return true;
        });
  });

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      SendError(res, 404, "NotFound", "no such endpoint");
    } else if (res.status == 405) {
      SendError(res, 405, "MethodNotAllowed", "method not allowed");
    }
  });
}

}  // namespace sentinel::service
