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

#include "sentinel/models/decision_tree.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sentinel/core/error.h"

namespace sentinel::models {

namespace {

constexpr double kImpurityEpsilon = 1e-12;

struct Candidate {
  bool valid = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double child_impurity = std::numeric_limits<double>::infinity();
};

struct Frame {
  int node;
  std::size_t begin;
  std::size_t end;
  int depth;
};

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& data, const DecisionTreeParams& params)
      : data_(data), params_(params), rng_(params.rng_seed) {
    const std::size_t d = data.x.cols();
    tries_ = std::clamp<std::size_t>(
        static_cast<std::size_t>(
            std::ceil(params.max_features * static_cast<double>(d))),
        1, d);
  }

  std::vector<DecisionTree::Node> Build() {
    std::vector<std::size_t> rows(data_.x.rows());
    std::iota(rows.begin(), rows.end(), 0);
    rows_ = std::move(rows);
    nodes_.push_back({});
    std::vector<Frame> stack = {{0, 0, rows_.size(), 0}};
    while (!stack.empty()) {
      Frame frame = stack.back();
      stack.pop_back();
      Expand(frame, stack);
    }
    return std::move(nodes_);
  }

 private:
  double NodeImpurity(std::size_t positives, std::size_t samples) const {
    return Impurity(params_.criterion,
                    static_cast<double>(positives) / static_cast<double>(samples));
  }

  void Expand(const Frame& frame, std::vector<Frame>& stack) {
    const std::size_t samples = frame.end - frame.begin;
    std::size_t positives = 0;
    for (std::size_t i = frame.begin; i < frame.end; ++i) {
      positives += data_.y[rows_[i]] ? 1 : 0;
    }
    auto& node = nodes_[frame.node];
    node.samples = static_cast<int>(samples);
    node.positives = static_cast<int>(positives);
    node.impurity = NodeImpurity(positives, samples);

    const auto leaf_min = static_cast<std::size_t>(params_.min_samples_leaf);
    if (frame.depth >= params_.max_depth || node.impurity <= kImpurityEpsilon ||
        samples < static_cast<std::size_t>(params_.min_samples_split) ||
        samples < 2 * leaf_min) {
      return;
    }

    const Candidate best = FindSplit(frame, positives);
    if (!best.valid) return;
    // Concavity of the impurity makes the weighted child impurity <= parent.
    if (best.child_impurity > node.impurity + 1e-9) {
      throw std::logic_error("decision tree split increased impurity");
    }

    const double threshold = best.threshold;
    const std::size_t feature = best.feature;
    auto mid = std::partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(frame.begin),
        rows_.begin() + static_cast<std::ptrdiff_t>(frame.end),
        [&](std::size_t r) { return data_.x(r, feature) <= threshold; });
    const auto split = static_cast<std::size_t>(mid - rows_.begin());

    const int left = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    const int right = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    auto& parent = nodes_[frame.node];
    parent.feature = static_cast<int>(feature);
    parent.threshold = threshold;
    parent.left = left;
    parent.right = right;
    stack.push_back({right, split, frame.end, frame.depth + 1});
    stack.push_back({left, frame.begin, split, frame.depth + 1});
  }

  std::vector<std::size_t> SampleFeatures() {
    std::vector<std::size_t> features(data_.x.cols());
    std::iota(features.begin(), features.end(), 0);
    if (tries_ < features.size()) {
      for (std::size_t i = 0; i < tries_; ++i) {
        std::uniform_int_distribution<std::size_t> draw(i, features.size() - 1);
        std::swap(features[i], features[draw(rng_)]);
      }
      features.resize(tries_);
    }
    return features;
  }

  Candidate FindSplit(const Frame& frame, std::size_t positives) {
    Candidate best;
    const std::size_t samples = frame.end - frame.begin;
    const auto leaf_min = static_cast<std::size_t>(params_.min_samples_leaf);
    std::vector<std::pair<double, bool>> column(samples);
    for (std::size_t feature : SampleFeatures()) {
      for (std::size_t i = 0; i < samples; ++i) {
        const std::size_t r = rows_[frame.begin + i];
        column[i] = {data_.x(r, feature), data_.y[r]};
      }
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (column.front().first == column.back().first) continue;

      auto weighted = [&](std::size_t n_left, std::size_t pos_left) {
        const std::size_t n_right = samples - n_left;
        const std::size_t pos_right = positives - pos_left;
        return (static_cast<double>(n_left) * NodeImpurity(pos_left, n_left) +
                static_cast<double>(n_right) * NodeImpurity(pos_right, n_right)) /
               static_cast<double>(samples);
      };

      if (params_.splitter == Splitter::kRandom) {
        std::uniform_real_distribution<double> uniform(column.front().first,
                                                       column.back().first);
        double threshold = uniform(rng_);
        if (threshold >= column.back().first) {
          threshold = std::nextafter(column.back().first, column.front().first);
        }
        std::size_t n_left = 0;
        std::size_t pos_left = 0;
        while (n_left < samples && column[n_left].first <= threshold) {
          pos_left += column[n_left].second ? 1 : 0;
          ++n_left;
        }
        if (n_left < leaf_min || samples - n_left < leaf_min) continue;
        const double impurity = weighted(n_left, pos_left);
        if (impurity < best.child_impurity) {
          best = {true, feature, threshold, impurity};
        }
        continue;
      }

      std::size_t pos_left = 0;
      for (std::size_t i = 0; i + 1 < samples; ++i) {
        pos_left += column[i].second ? 1 : 0;
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        if (n_left < leaf_min || samples - n_left < leaf_min) continue;
        const double impurity = weighted(n_left, pos_left);
        if (impurity < best.child_impurity - kImpurityEpsilon) {
          double threshold = 0.5 * (column[i].first + column[i + 1].first);
          if (threshold >= column[i + 1].first) threshold = column[i].first;
          best = {true, feature, threshold, impurity};
        }
      }
    }
    return best;
  }

  const LabeledDataset& data_;
  const DecisionTreeParams& params_;
  std::mt19937_64 rng_;
  std::size_t tries_ = 1;
  std::vector<std::size_t> rows_;
  std::vector<DecisionTree::Node> nodes_;
};

std::string_view CriterionName(SplitCriterion c) {
  return c == SplitCriterion::kGini ? "gini" : "entropy";
}
std::string_view SplitterName(Splitter s) {
  return s == Splitter::kBest ? "best" : "random";
}

}  // namespace

void DecisionTreeParams::Validate() const {
  if (max_depth < 1) throw Error(ErrorCode::kInvalidArgument, "max_depth must be >= 1");
  if (!(max_features > 0.0 && max_features <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max_features must be in (0, 1]");
  }
  if (min_samples_leaf < 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_samples_leaf must be >= 1");
  }
  if (min_samples_split < 2) {
    throw Error(ErrorCode::kInvalidArgument, "min_samples_split must be >= 2");
  }
}

double Impurity(SplitCriterion criterion, double p) {
  const double q = 1.0 - p;
  if (criterion == SplitCriterion::kGini) return 1.0 - p * p - q * q;
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (q > 0.0) h -= q * std::log2(q);
  return h;
}

DecisionTree DecisionTree::Fit(const LabeledDataset& data,
                               const DecisionTreeParams& params) {
  params.Validate();
  data.RequireBothClasses();
  DecisionTree tree;
  tree.params_ = params;
  tree.dims_ = data.x.cols();
  tree.nodes_ = TreeBuilder(data, params).Build();
  return tree;
}

double DecisionTree::PredictProba(std::span<const double> row) const {
  if (row.size() != dims_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(dims_) + " features");
  }
  int node = 0;
  while (nodes_[node].feature >= 0) {
    const auto& n = nodes_[node];
    node = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes_[node].probability();
}

std::vector<double> DecisionTree::PredictProba(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = PredictProba(x.row(i));
  return out;
}

int DecisionTree::depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.feature < 0) continue;
    depth[n.left] = depth[n.right] = depth[i] + 1;
    deepest = std::max(deepest, depth[i] + 1);
  }
  return deepest;
}

nlohmann::json DecisionTree::ToJson() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.samples,
                     n.positives, n.impurity});
  }
  return {{"params",
           {{"criterion", CriterionName(params_.criterion)},
            {"splitter", SplitterName(params_.splitter)},
            {"max_depth", params_.max_depth},
            {"max_features", params_.max_features},
            {"min_samples_leaf", params_.min_samples_leaf},
            {"min_samples_split", params_.min_samples_split},
            {"rng_seed", params_.rng_seed}}},
          {"dims", dims_},
          {"nodes", std::move(nodes)}};
}

DecisionTree DecisionTree::FromJson(const nlohmann::json& doc) {
  DecisionTree tree;
  const auto& p = doc.at("params");
  tree.params_.criterion = p.at("criterion") == "gini" ? SplitCriterion::kGini
                                                       : SplitCriterion::kEntropy;
  tree.params_.splitter =
      p.at("splitter") == "random" ? Splitter::kRandom : Splitter::kBest;
  tree.params_.max_depth = p.at("max_depth");
  tree.params_.max_features = p.at("max_features");
  tree.params_.min_samples_leaf = p.at("min_samples_leaf");
  tree.params_.min_samples_split = p.at("min_samples_split");
  tree.params_.rng_seed = p.at("rng_seed");
  tree.dims_ = doc.at("dims");
  for (const auto& n : doc.at("nodes")) {
    tree.nodes_.push_back({n.at(0), n.at(1), n.at(2), n.at(3), n.at(4), n.at(5),
                           n.at(6)});
  }
  return tree;
}

}  // namespace sentinel::models
