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


// Seeded random search over a declared hyperparameter space.

#ifndef SENTINEL_TUNING_RANDOM_SEARCH_H_
#define SENTINEL_TUNING_RANDOM_SEARCH_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace sentinel::tuning {

struct Domain {
  enum class Type { kCategorical, kInteger, kFloat };

  std::string name;
  Type type = Type::kFloat;
  std::vector<nlohmann::json> choices;  // categorical
  double low = 0.0;                     // integer / float, inclusive
  double high = 0.0;
  bool log_scale = false;  // float only
};

class SearchSpace {
 public:
  SearchSpace& Categorical(std::string name, std::vector<nlohmann::json> choices);
  SearchSpace& Integer(std::string name, int low, int high);
  SearchSpace& Float(std::string name, double low, double high, bool log_scale = false);

  // Throws kInvalidArgument on an empty space, an empty domain, low > high
  // or a non-positive log-scale bound.
  void Validate() const;
  // One independent draw per domain, in declaration order.
  nlohmann::json Sample(std::mt19937_64& rng) const;

  const std::vector<Domain>& domains() const { return domains_; }

 private:
  std::vector<Domain> domains_;
};

struct TrialOutcome {
  double objective = 0.0;
  double fit_time_s = 0.0;
  double predict_time_s = 0.0;
};

struct TrialRecord {
  int trial = 0;
  nlohmann::json params;
  double objective = 0.0;
  double fit_time_s = 0.0;
  double predict_time_s = 0.0;
  bool failed = false;
  std::string error;  // set when failed
};

using Objective = std::function<TrialOutcome(const nlohmann::json& params)>;

struct SearchResult {
  std::vector<TrialRecord> trials;  // in trial order, failures included
  std::optional<std::size_t> best;  // index into trials

  std::size_t successful() const;
  // Throws kEmptyTrials when every trial failed.
  const TrialRecord& best_trial() const;
};

// Parameters for all trials are drawn up front from `seed`, so the table is
// identical whatever `parallelism` is. An objective that throws or returns a
// non-finite value makes a failed trial. The best trial maximises the
// objective; ties go to the earliest trial.
SearchResult RandomSearch(const SearchSpace& space, const Objective& objective,
                          int n_trials = 50, std::uint64_t seed = 0, int parallelism = 1);

// Header `trial,params_json,objective,fit_time_s,predict_time_s`; one row per
// successful trial.
void WriteTrialTable(std::ostream& out, const std::vector<TrialRecord>& trials);

struct BenchmarkRow {
  std::string model;
  std::string metric;  // "silhouette" or "f1"
  double best_objective = 0.0;
  double fit_time_s = 0.0;
  double predict_time_s = 0.0;
  nlohmann::json best_params;
};

// Summary of the best successful trial. Throws kEmptyTrials.
BenchmarkRow BenchmarkReport(const std::string& model, const std::string& metric,
                             const std::vector<TrialRecord>& trials);
// Fixed-width table: Model, Best <metric>, Fit Time (s), Pred. Time (s).
std::string FormatBenchmarkTable(const std::vector<BenchmarkRow>& rows);
nlohmann::json BenchmarkRowToJson(const BenchmarkRow& row);

}  // namespace sentinel::tuning

#endif  // SENTINEL_TUNING_RANDOM_SEARCH_H_
