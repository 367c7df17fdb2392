// Copyright 2026 The TinyIDS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "tinyids/features.hpp"
#include "tinyids/rng.hpp"
#include "tinyids/tree.hpp"

namespace tinyids::testing {

// Exhaustive search over every tree of depth <= 2 whose internal nodes use
// midpoint thresholds of the full dataset. Returns the best number of
// correctly classified training rows.
class DepthTwoOracle {
 public:
  explicit DepthTwoOracle(const LabeledDataset& data) : data_(data) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      std::set<float> values;
      for (const auto& fv : data.features) values.insert(fv[f]);
      for (auto it = values.begin(); it != values.end() && std::next(it) != values.end(); ++it)
        splits_.push_back({f, midpoint_threshold(*it, *std::next(it))});
    }
  }

  std::size_t best_correct() const {
    std::vector<std::size_t> all(data_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return best(all, 2);
  }

 private:
  struct Cut {
    std::size_t feature;
    float threshold;
  };

  std::size_t majority(const std::vector<std::size_t>& rows) const {
    std::size_t ones = 0;
    for (auto i : rows) ones += data_.labels[i];
    return std::max(ones, rows.size() - ones);
  }

  std::size_t best(const std::vector<std::size_t>& rows, int depth) const {
    std::size_t b = majority(rows);
    if (depth == 0 || rows.empty()) return b;
    for (const auto& c : splits_) {
      std::vector<std::size_t> l, r;
      for (auto i : rows) (data_.features[i][c.feature] <= c.threshold ? l : r).push_back(i);
      b = std::max(b, best(l, depth - 1) + best(r, depth - 1));
    }
    return b;
  }

  const LabeledDataset& data_;
  std::vector<Cut> splits_;
};

// Small datasets: N in [4, 12], every feature drawn from {0, 0.5, 1},
// labels Bernoulli(0.5) with both classes present.
inline LabeledDataset small_instance(SplitMix64& rng) {
  for (;;) {
    LabeledDataset d;
    const auto n = rng.uniform_int(4, 12);
    for (std::uint64_t i = 0; i < n; ++i) {
      FeatureVector fv{};
      for (auto& v : fv) v = 0.5f * static_cast<float>(rng.uniform_int(0, 2));
      d.features.push_back(fv);
      d.labels.push_back(static_cast<std::uint8_t>(rng.uniform_int(0, 1)));
    }
    const auto ones = std::count(d.labels.begin(), d.labels.end(), 1);
    if (ones > 0 && ones < static_cast<long>(n)) return d;
  }
}

inline TreeParams small_instance_params() {
  TreeParams p;
  p.max_depth = 2;
  p.min_samples_split = 2;
  p.min_impurity_decrease = 0;
  return p;
}

inline std::size_t training_correct(const TreeModel& tree, const LabeledDataset& d) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.size(); ++i) ok += predict(tree, d.features[i]) == d.labels[i];
  return ok;
}

}  // namespace tinyids::testing
