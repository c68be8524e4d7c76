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


#include <gtest/gtest.h>

#include <filesystem>
#include <memory>
#include <thread>

#include "httplib.h"
#include "sentinel/engine/engine.h"
#include "sentinel/graph/snapshot_json.h"
#include "sentinel/service/api_server.h"

namespace sentinel::service {
namespace {

using nlohmann::json;
using K = ComponentKind;

pipeline::PipelineConfig FastConfig() {
  auto config = pipeline::PipelineConfig::Default();
  config.min_training_rows = 10;
  for (K k : {K::kPod, K::kNode, K::kContainer}) {
    config.kinds[k].unsupervised.iforest.n_estimators = 20;
  }
  return config;
}

class ApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    engine_ = std::make_unique<engine::Engine>(FastConfig(), engine::EngineOptions{});
    server_ = std::make_unique<ApiServer>(*engine_, ApiServerOptions{0.5});
    port_ = server_->Start("127.0.0.1", 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(10, 0);
  }
  void TearDown() override {
    client_.reset();
    server_->Stop();
  }

  json Body(const httplib::Result& r) { return json::parse(r->body); }
  httplib::Result Post(const std::string& path, const std::string& body = "{}") {
    return client_->Post(path, body, "application/json");
  }

  std::unique_ptr<engine::Engine> engine_;
  std::unique_ptr<ApiServer> server_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST(ApiHelpersTest, StatusMapping) {
  EXPECT_EQ(StatusFor(ErrorCode::kNotFound), 404);
  EXPECT_EQ(StatusFor(ErrorCode::kUnknownTarget), 404);
  EXPECT_EQ(StatusFor(ErrorCode::kDuplicateFault), 409);
  EXPECT_EQ(StatusFor(ErrorCode::kInvalidConfig), 422);
  EXPECT_EQ(StatusFor(ErrorCode::kCyclicPolicy), 422);
  EXPECT_EQ(StatusFor(ErrorCode::kUnknownKind), 400);
  EXPECT_EQ(StatusFor(ErrorCode::kParseError), 400);
  EXPECT_EQ(StatusFor(ErrorCode::kHttpError), 500);
  EXPECT_EQ(ErrorBody("NotFound", "x"), (json{{"error", "NotFound"}, {"detail", "x"}}));
}

TEST(ApiHelpersTest, ListenAddress) {
  EXPECT_EQ(ParseListenAddress("0.0.0.0:9000"), (std::pair<std::string, int>{"0.0.0.0", 9000}));
  EXPECT_EQ(ParseListenAddress(":81").second, 81);
  EXPECT_EQ(ParseListenAddress("8080").second, 8080);
  EXPECT_THROW(ParseListenAddress("host:"), Error);
  EXPECT_THROW(ParseListenAddress("host:99999"), Error);
}

TEST_F(ApiTest, StatusAndGraph) {
  auto r = client_->Get("/api/status");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  auto doc = Body(r);
  EXPECT_EQ(doc["mode"], "simulate");
  EXPECT_EQ(doc["nodes"], engine_->graph().node_count());
  const auto g1 = client_->Get("/api/graph");
  const auto g2 = client_->Get("/api/graph");
  EXPECT_EQ(g1->status, 200);
  EXPECT_EQ(g1->body, g2->body);  // reads do not change the graph
  const auto snapshot = graph::SnapshotFromJson(json::parse(g1->body));
  EXPECT_EQ(snapshot.nodes.size(), engine_->graph().node_count());
}

TEST_F(ApiTest, ComponentQueries) {
  auto r = client_->Get("/api/components/Pod");
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(Body(r)["components"].size(), 12u);
  r = client_->Get("/api/components/pod");
  EXPECT_EQ(Body(r)["kind"], "Pod");
  r = client_->Get("/api/components/Gizmo");
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(Body(r)["error"], "UnknownKind");

  const auto pod = engine_->simulator()->pods()[0];
  r = client_->Get("/api/component/" + pod);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(Body(r)["id"], pod);
  r = client_->Get("/api/component/missing");
  EXPECT_EQ(r->status, 404);
  EXPECT_EQ(Body(r)["error"], "NotFound");

  r = client_->Get("/api/component/" + pod + "/neighbors?edge=RUNS_ON&direction=out");
  EXPECT_EQ(r->status, 200);
  auto doc = Body(r);
  ASSERT_EQ(doc["neighbors"].size(), 1u);
  EXPECT_EQ(doc["neighbors"][0]["id"], engine_->simulator()->HostOf(pod));
  EXPECT_EQ(doc["neighbors"][0]["edge_type"], "RUNS_ON");
  r = client_->Get("/api/component/" + pod + "/neighbors");
  EXPECT_GE(Body(r)["neighbors"].size(), 3u);  // host, owner, container, namespace
  EXPECT_EQ(Body(r)["direction"], "both");
  r = client_->Get("/api/component/" + pod + "/neighbors?edge=FLIES_TO");
  EXPECT_EQ(r->status, 400);

  r = client_->Get("/api/component/" + pod + "/trace");
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(Body(r)["host_node"]["id"], engine_->simulator()->HostOf(pod));
  EXPECT_EQ(client_->Get("/api/component/missing/trace")->status, 404);
  EXPECT_EQ(client_->Get("/api/nothing")->status, 404);
}

TEST_F(ApiTest, PipelineTriggers) {
  for (int i = 0; i < 2; ++i) {
    auto r = Post("/api/pipeline/update-graph", "");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200);
    EXPECT_EQ(Body(r)["event_kind"], "score_update");
  }
  auto r = Post("/api/pipeline/update-models", "");
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(Body(r)["event_kind"], "model_retrained");
  EXPECT_NE(engine_->bundles().Get(K::kPod), nullptr);
  r = Post("/api/pipeline/update-graph", "");
  EXPECT_EQ(r->status, 200);
  const auto pod = engine_->simulator()->pods()[0];
  const auto doc = Body(client_->Get("/api/component/" + pod));
  EXPECT_TRUE(doc["anomaly_score"].is_number());
  r = client_->Get("/api/models");
  EXPECT_EQ(r->status, 200);
}

TEST_F(ApiTest, ConfigReadAndReplace) {
  auto r = client_->Get("/api/config");
  EXPECT_EQ(r->status, 200);
  auto doc = Body(r);
  doc["pipeline"]["min_training_rows"] = 15;
  r = client_->Put("/api/config", doc.dump(), "application/json");
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(engine_->config().min_training_rows, 15u);
  doc["pipeline"]["update_graph_interval_s"] = 0;
  r = client_->Put("/api/config", doc.dump(), "application/json");
  EXPECT_EQ(r->status, 422);
  const auto err = Body(r);
  EXPECT_EQ(err["error"], "InvalidConfig");
  ASSERT_EQ(err["fields"].size(), 1u);
  EXPECT_EQ(err["fields"][0]["field"], "pipeline.update_graph_interval_s");
  r = client_->Put("/api/config", "{nope", "application/json");
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(engine_->config().min_training_rows, 15u);
}

TEST_F(ApiTest, FaultLifecycle) {
  const auto pod = engine_->simulator()->pods()[1];
  const json fault = {{"target_pod", pod}, {"fault_kind", "mem_leak"}, {"workers", 8}};
  auto r = Post("/api/simulator/fault", fault.dump());
  ASSERT_EQ(r->status, 201);
  const std::string id = Body(r)["fault_id"];
  EXPECT_EQ(Post("/api/simulator/fault", fault.dump())->status, 409);
  r = Post("/api/simulator/fault", json{{"target_pod", "ghost"}, {"fault_kind", "cpu_hog"}}.dump());
  EXPECT_EQ(r->status, 404);
  r = Post("/api/simulator/fault", json{{"target_pod", pod}, {"fault_kind", "fire"}}.dump());
  EXPECT_EQ(r->status, 400);
  r = client_->Get("/api/simulator/faults");
  ASSERT_EQ(Body(r)["faults"].size(), 1u);
  EXPECT_EQ(Body(r)["faults"][0]["fault_id"], id);
  EXPECT_EQ(client_->Delete("/api/simulator/fault/" + id)->status, 204);
  EXPECT_EQ(client_->Delete("/api/simulator/fault/" + id)->status, 404);
  EXPECT_TRUE(Body(client_->Get("/api/simulator/faults"))["faults"].empty());
}

std::vector<std::pair<std::string, std::string>> ParseFrames(const std::string& text) {
  // (id, event) per frame; comment frames map to ("", comment).
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find("\n\n", pos);
    if (end == std::string::npos) break;
    const std::string frame = text.substr(pos, end - pos);
    pos = end + 2;
    if (frame.rfind(":", 0) == 0) {
      out.push_back({"", frame});
      continue;
    }
    std::string id, event;
    std::size_t line = 0;
    while (line < frame.size()) {
      auto nl = frame.find('\n', line);
      if (nl == std::string::npos) nl = frame.size();
      const std::string l = frame.substr(line, nl - line);
      if (l.rfind("id: ", 0) == 0) id = l.substr(4);
      if (l.rfind("event: ", 0) == 0) event = l.substr(7);
      if (l.rfind("data: ", 0) == 0) EXPECT_NO_THROW(json::parse(l.substr(6)));
      line = nl + 1;
    }
    out.push_back({id, event});
  }
  return out;
}

TEST_F(ApiTest, EventStreamResumes) {
  for (int i = 0; i < 3; ++i) Post("/api/pipeline/update-graph", "");
  Post("/api/pipeline/update-models", "");
  auto r = client_->Get("/api/events?max_events=3");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Content-Type"), "text/event-stream");
  auto frames = ParseFrames(r->body);
  ASSERT_EQ(frames.size(), 3u);
  EXPECT_EQ(frames[0], (std::pair<std::string, std::string>{"1", "score_update"}));
  EXPECT_EQ(frames[2].first, "3");

  r = client_->Get("/api/events?max_events=1", {{"Last-Event-ID", "3"}});
  frames = ParseFrames(r->body);
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0], (std::pair<std::string, std::string>{"4", "model_retrained"}));
  r = client_->Get("/api/events?max_events=1&last_event_id=2");
  EXPECT_EQ(ParseFrames(r->body).at(0).first, "3");
  EXPECT_EQ(client_->Get("/api/events?max_events=0")->status, 400);
  EXPECT_EQ(client_->Get("/api/events", {{"Last-Event-ID", "abc"}})->status, 400);
}

TEST_F(ApiTest, EventStreamWaitsForNewEvents) {
  std::thread producer([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(700));
    engine_->GraphTick(1.0);
  });
  const auto r = client_->Get("/api/events?max_events=1");
  producer.join();
  const auto frames = ParseFrames(r->body);
  ASSERT_GE(frames.size(), 2u);
  EXPECT_EQ(frames.front().first, "");  // keep-alive while idle
  EXPECT_EQ(frames.back(), (std::pair<std::string, std::string>{"1", "score_update"}));
}

TEST(ApiLiveModeTest, FaultControlIsRejected) {
  auto config = FastConfig();
  const auto topo = (std::filesystem::temp_directory_path() /
                     ("api-topology-" + std::to_string(::getpid()) + ".json")).string();
  graph::WriteSnapshotFile(topo, ingestion::ClusterSimulator(config.simulator).Topology());
  config.live.topology_file = topo;
  config.live.prometheus_url = "http://127.0.0.1:1";
  config.live.scrape_timeout_s = 0.2;
  config.live.queries = {{K::kPod, "cpu_usage", "q", "", "pod"}};
  engine::Engine engine(config, {engine::RunMode::kLive, ""});
  ApiServer server(engine);
  const int port = server.Start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);
  auto r = client.Get("/api/simulator/faults");
  EXPECT_EQ(r->status, 405);
  EXPECT_EQ(json::parse(r->body)["error"], "ModeNotSupported");
  r = client.Post("/api/simulator/fault", "{}", "application/json");
  EXPECT_EQ(r->status, 405);
  EXPECT_EQ(client.Delete("/api/simulator/fault/x")->status, 405);
  r = client.Post("/api/pipeline/update-graph", "", "application/json");
  EXPECT_EQ(r->status, 500);
  EXPECT_EQ(json::parse(r->body)["error"], "HttpError");
  EXPECT_EQ(json::parse(client.Get("/api/status")->body)["mode"], "live");
  server.Stop();
  std::filesystem::remove(topo);
}

}  // namespace
}  // namespace sentinel::service
