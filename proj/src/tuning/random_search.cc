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


#include "sentinel/tuning/random_search.h"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "sentinel/core/error.h"

namespace sentinel::tuning {

using nlohmann::json;

SearchSpace& SearchSpace::Categorical(std::string name, std::vector<json> choices) {
  Domain d;
  d.name = std::move(name);
  d.type = Domain::Type::kCategorical;
  d.choices = std::move(choices);
  domains_.push_back(std::move(d));
  return *this;
}

SearchSpace& SearchSpace::Integer(std::string name, int low, int high) {
  Domain d;
  d.name = std::move(name);
  d.type = Domain::Type::kInteger;
  d.low = low;
  d.high = high;
  domains_.push_back(std::move(d));
  return *this;
}

SearchSpace& SearchSpace::Float(std::string name, double low, double high, bool log_scale) {
  Domain d;
  d.name = std::move(name);
  d.type = Domain::Type::kFloat;
  d.low = low;
  d.high = high;
  d.log_scale = log_scale;
  domains_.push_back(std::move(d));
  return *this;
}

void SearchSpace::Validate() const {
  if (domains_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty search space");
  for (const auto& d : domains_) {
    if (d.type == Domain::Type::kCategorical) {
      if (d.choices.empty()) {
        throw Error(ErrorCode::kInvalidArgument, d.name + ": no choices");
      }
      continue;
    }
    if (!(d.low <= d.high)) {
      throw Error(ErrorCode::kInvalidArgument, d.name + ": low > high");
    }
    if (d.log_scale && !(d.low > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, d.name + ": log scale needs low > 0");
    }
  }
}

json SearchSpace::Sample(std::mt19937_64& rng) const {
  json params = json::object();
  for (const auto& d : domains_) {
    switch (d.type) {
      case Domain::Type::kCategorical: {
        std::uniform_int_distribution<std::size_t> pick(0, d.choices.size() - 1);
        params[d.name] = d.choices[pick(rng)];
        break;
      }
      case Domain::Type::kInteger: {
        std::uniform_int_distribution<int> pick(static_cast<int>(d.low),
                                                static_cast<int>(d.high));
        params[d.name] = pick(rng);
        break;
      }
      case Domain::Type::kFloat: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double t = u(rng);
        params[d.name] = d.log_scale
                             ? std::exp(std::log(d.low) + t * (std::log(d.high) - std::log(d.low)))
                             : d.low + t * (d.high - d.low);
        break;
      }
    }
  }
  return params;
}

std::size_t SearchResult::successful() const {
  std::size_t count = 0;
  for (const auto& t : trials) count += t.failed ? 0 : 1;
  return count;
}

const TrialRecord& SearchResult::best_trial() const {
  if (!best) throw Error(ErrorCode::kEmptyTrials, "no successful trials");
  return trials[*best];
}

SearchResult RandomSearch(const SearchSpace& space, const Objective& objective, int n_trials,
                          std::uint64_t seed, int parallelism) {
  space.Validate();
  if (n_trials < 1) throw Error(ErrorCode::kInvalidArgument, "n_trials must be >= 1");
  std::mt19937_64 rng(seed);
  SearchResult result;
  result.trials.resize(static_cast<std::size_t>(n_trials));
  for (int t = 0; t < n_trials; ++t) {
    result.trials[t].trial = t;
    result.trials[t].params = space.Sample(rng);
  }

  auto run = [&](TrialRecord& record) {
    try {
      const TrialOutcome outcome = objective(record.params);
      if (!std::isfinite(outcome.objective)) {
        record.failed = true;
        record.error = "non-finite objective";
        return;
      }
      record.objective = outcome.objective;
      record.fit_time_s = outcome.fit_time_s;
      record.predict_time_s = outcome.predict_time_s;
    } catch (const std::exception& e) {
      record.failed = true;
      record.error = e.what();
    }
  };

  if (parallelism <= 1) {
    for (auto& record : result.trials) run(record);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < parallelism; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < result.trials.size(); i = next++) {
          run(result.trials[i]);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    const auto& t = result.trials[i];
    if (t.failed) continue;
    if (!result.best || t.objective > result.trials[*result.best].objective) result.best = i;
  }
  return result;
}

namespace {

std::string CsvQuote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string FormatDouble(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

void WriteTrialTable(std::ostream& out, const std::vector<TrialRecord>& trials) {
  out << "trial,params_json,objective,fit_time_s,predict_time_s\n";
  for (const auto& t : trials) {
    if (t.failed) continue;
    out << t.trial << ',' << CsvQuote(t.params.dump()) << ',' << FormatDouble(t.objective)
        << ',' << FormatDouble(t.fit_time_s) << ',' << FormatDouble(t.predict_time_s) << '\n';
  }
}

BenchmarkRow BenchmarkReport(const std::string& model, const std::string& metric,
                             const std::vector<TrialRecord>& trials) {
  const TrialRecord* best = nullptr;
  for (const auto& t : trials) {
    if (t.failed) continue;
    if (best == nullptr || t.objective > best->objective) best = &t;
  }
  if (best == nullptr) throw Error(ErrorCode::kEmptyTrials, "no successful trials for " + model);
  return {model, metric, best->objective, best->fit_time_s, best->predict_time_s, best->params};
}

std::string FormatBenchmarkTable(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream out;
  const std::string metric = rows.empty() ? "objective" : rows.front().metric;
  out << std::left << std::setw(22) << "Model" << std::setw(18) << ("Best " + metric)
      << std::setw(16) << "Fit Time (s)" << "Pred. Time (s)\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(22) << r.model << std::setw(18) << std::fixed
        << std::setprecision(4) << r.best_objective << std::setw(16) << std::setprecision(4)
        << r.fit_time_s << std::setprecision(4) << r.predict_time_s << '\n';
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

json BenchmarkRowToJson(const BenchmarkRow& row) {
  return {{"model", row.model},
          {"metric", row.metric},
          {"best_objective", row.best_objective},
          {"fit_time_s", row.fit_time_s},
          {"predict_time_s", row.predict_time_s},
          {"best_params", row.best_params}};
}

}  // namespace sentinel::tuning
