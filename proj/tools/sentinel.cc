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


// sentinel: run the engine, run the fault scenarios, tune the models.
//
// Exit codes: 0 success, 1 failed experiment checks, 2 usage or config error.

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "sentinel/engine/engine.h"
#include "sentinel/engine/experiment.h"
#include "sentinel/models/classifier.h"
#include "sentinel/pipeline/config.h"
#include "sentinel/service/api_server.h"
#include "sentinel/tuning/benchmark.h"

namespace {

using namespace sentinel;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kChecksFailed = 1;
constexpr int kUsage = 2;

std::atomic<bool> g_stop{false};

void OnSignal(int) { g_stop = true; }

void PrintConfigError(const pipeline::ConfigError& e, const std::string& source) {
  std::cerr << "sentinel: invalid config";
  if (!source.empty()) std::cerr << " " << source;
  std::cerr << ":\n";
  for (const auto& f : e.fields()) std::cerr << "  " << f.field << ": " << f.message << "\n";
}

struct RunArgs {
  std::string config;
  std::string mode = "simulate";
  std::string listen = "127.0.0.1:8080";
  std::string replay_file;
  double duration_s = 0.0;
};

int Run(const RunArgs& args) {
  pipeline::PipelineConfig config = pipeline::PipelineConfig::Default();
  try {
    if (!args.config.empty()) config = pipeline::LoadConfigFile(args.config);
  } catch (const pipeline::ConfigError& e) {
    PrintConfigError(e, args.config);
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "sentinel: cannot load config " << args.config << ": " << e.detail() << "\n";
    return kUsage;
  }
  engine::EngineOptions options;
  std::pair<std::string, int> address;
  try {
    options.mode = engine::ParseRunMode(args.mode);
    options.replay_file = args.replay_file;
    address = service::ParseListenAddress(args.listen);
  } catch (const Error& e) {
    std::cerr << "sentinel: " << e.detail() << "\n";
    return kUsage;
  }
  if (options.mode == engine::RunMode::kReplay && options.replay_file.empty()) {
    std::cerr << "sentinel: --mode replay needs --replay-file\n";
    return kUsage;
  }

  std::unique_ptr<engine::Engine> engine;
  try {
    engine = std::make_unique<engine::Engine>(config, options);
  } catch (const pipeline::ConfigError& e) {
    PrintConfigError(e, args.config);
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "sentinel: " << e.what() << "\n";
    return kUsage;
  }

  service::ApiServer server(*engine);
  int port = 0;
  try {
    port = server.Start(address.first, address.second);
  } catch (const Error& e) {
    std::cerr << "sentinel: " << e.detail() << "\n";
    return kUsage;
  }
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::cout << "sentinel: " << engine::RunModeName(options.mode) << " mode, listening on "
            << address.first << ":" << port << std::endl;
  engine->Start();
  const auto started = std::chrono::steady_clock::now();
  while (!g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    if (args.duration_s > 0.0 &&
        std::chrono::steady_clock::now() - started >=
            std::chrono::duration<double>(args.duration_s)) {
      break;
    }
  }
  engine->Stop();
  engine->events().Close();
  server.Stop();
  return kOk;
}

struct ExperimentArgs {
  std::string name;
  std::string report;
  std::uint64_t seed = 0;
  bool realtime = false;
};

int Experiment(const ExperimentArgs& args) {
  engine::ExperimentOptions options;
  try {
    options.fault = engine::ParseExperimentName(args.name);
  } catch (const Error& e) {
    std::cerr << "sentinel: " << e.detail() << "\n";
    return kUsage;
  }
  options.seed = args.seed;
  options.realtime = args.realtime;
  std::ofstream out(args.report);
  if (!out) {
    std::cerr << "sentinel: cannot write report " << args.report << "\n";
    return kUsage;
  }
  const auto result = engine::RunExperiment(options);
  out << result.report.dump(2) << "\n";
  out.close();
  for (const auto& check : result.report["checks"]) {
    std::cout << (check["passed"].get<bool>() ? "PASS " : "FAIL ")
              << check["id"].get<std::string>() << " " << check["name"].get<std::string>()
              << " value=" << check["value"].dump() << "\n";
  }
  std::cout << args.name << ": " << (result.pass ? "pass" : "fail") << ", report "
            << args.report << "\n";
  return result.pass ? kOk : kChecksFailed;
}

struct TuneArgs {
  std::string model;
  int trials = 50;
  std::string data;
  std::string out;
  std::string summary;
  std::uint64_t seed = 0;
};

int Tune(const TuneArgs& args) {
  tuning::FeatureTable table;
  try {
    table = tuning::ReadFeatureTable(args.data);
  } catch (const Error& e) {
    std::cerr << "sentinel: cannot read data " << args.data << ": " << e.detail() << "\n";
    return kUsage;
  }
  std::ofstream out(args.out);
  if (!out) {
    std::cerr << "sentinel: cannot write " << args.out << "\n";
    return kUsage;
  }

  tuning::SearchResult search;
  std::string metric;
  json labels_source = nullptr;
  try {
    if (args.model == "iforest" || args.model == "dbscan" || args.model == "ocsvm") {
      const auto kind = models::ParseUnsupervised(args.model);
      metric = "silhouette";
      search = tuning::RandomSearch(tuning::DefaultSearchSpace(kind),
                                    tuning::UnsupervisedObjective(table.x, kind, args.seed),
                                    args.trials, args.seed);
    } else {
      const auto kind = models::ParseSupervised(args.model);
      metric = "f1";
      models::LabeledDataset data;
      data.x = table.x;
      if (table.labels) {
        data.y = *table.labels;
        labels_source = "file";
      } else {
        // Unlabeled data is labeled by a tuned Isolation Forest first.
        auto tuned = tuning::LabelWithTunedForest(table.x, args.trials, args.seed);
        data.y = tuned.labeling.labels;
        labels_source = {{"iforest", tuned.best_params},
                         {"anomalies", tuned.labeling.anomaly_count()}};
      }
      search = tuning::RandomSearch(tuning::DefaultSearchSpace(kind),
                                    tuning::SupervisedObjective(data, kind, args.seed),
                                    args.trials, args.seed);
    }
  } catch (const Error& e) {
    std::cerr << "sentinel: " << e.what() << "\n";
    return kUsage;
  }
  tuning::WriteTrialTable(out, search.trials);
  out.close();
  if (!search.best) {
    std::cerr << "sentinel: every trial failed";
    for (const auto& t : search.trials) {
      if (t.failed) {
        std::cerr << " (first error: " << t.error << ")";
        break;
      }
    }
    std::cerr << "\n";
    return kChecksFailed;
  }
  const auto row = tuning::BenchmarkReport(args.model, metric, search.trials);
  std::cout << tuning::FormatBenchmarkTable({row});
  json summary = tuning::BenchmarkRowToJson(row);
  summary["trials"] = search.trials.size();
  summary["successful_trials"] = search.successful();
  summary["seed"] = args.seed;
  if (!labels_source.is_null()) summary["labels"] = labels_source;
  const std::string summary_path = args.summary.empty() ? args.out + ".summary.json" : args.summary;
  std::ofstream summary_out(summary_path);
  if (!summary_out) {
    std::cerr << "sentinel: cannot write " << summary_path << "\n";
    return kUsage;
  }
  summary_out << summary.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based anomaly detection for container clusters"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Start the scheduler and the HTTP service");
  run_cmd->add_option("--config", run.config, "Pipeline config (TOML)");
  run_cmd->add_option("--mode", run.mode, "live, simulate or replay")
      ->check(CLI::IsMember({"live", "simulate", "replay"}));
  run_cmd->add_option("--listen", run.listen, "host:port to serve on");
  run_cmd->add_option("--replay-file", run.replay_file, "Recording to replay");
  run_cmd->add_option("--duration", run.duration_s, "Stop after this many seconds (0 = run until signalled)");

  ExperimentArgs experiment;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a fault scenario on the simulator");
  exp_cmd->add_option("scenario", experiment.name, "cpu-hog or mem-leak")
      ->required()
      ->check(CLI::IsMember({"cpu-hog", "mem-leak"}));
  exp_cmd->add_option("--report", experiment.report, "Report path (JSON)")->required();
  exp_cmd->add_option("--seed", experiment.seed, "Seed for the simulator and models");
  exp_cmd->add_flag("--realtime", experiment.realtime, "Pace ticks in wall-clock time");

  TuneArgs tune;
  auto* tune_cmd = app.add_subcommand("tune", "Random-search a model's hyperparameters");
  tune_cmd->add_option("--model", tune.model, "Model to tune")
      ->required()
      ->check(CLI::IsMember({"iforest", "dbscan", "ocsvm", "dtree", "logreg", "svm"}));
  tune_cmd->add_option("--trials", tune.trials, "Number of trials")->check(CLI::PositiveNumber);
  tune_cmd->add_option("--data", tune.data, "Feature table with a header row")->required();
  tune_cmd->add_option("--out", tune.out, "Trial table (CSV)")->required();
  tune_cmd->add_option("--summary", tune.summary, "Summary row (JSON); default <out>.summary.json");
  tune_cmd->add_option("--seed", tune.seed, "Search seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*run_cmd) return Run(run);
  if (*exp_cmd) return Experiment(experiment);
  return Tune(tune);
}
