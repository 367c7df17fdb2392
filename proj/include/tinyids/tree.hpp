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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tinyids/features.hpp"

namespace tinyids {

struct TreeParams {
  std::size_t max_depth = 10;
  std::size_t min_samples_split = 4;
  double min_impurity_decrease = 1e-7;

  void validate() const;
};

struct TreeNode {
  static constexpr std::int32_t kNone = -1;

  // Internal when left != kNone.
  std::uint8_t feature = 0;
  float threshold = 0.0f;
  std::int32_t left = kNone;
  std::int32_t right = kNone;
  // Leaf payload.
  std::uint8_t cls = 0;
  std::array<std::uint32_t, 2> class_counts{0, 0};

  bool is_leaf() const { return left == kNone; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Binary classification tree, root at index 0, children listed in preorder.
struct TreeModel {
  std::vector<TreeNode> nodes;

  std::size_t depth() const;
  // Empty string when acyclic, rooted at 0, fully wired and feature < 9.
  std::string check() const;

  friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

struct Split {
  std::size_t feature = 0;
  float threshold = 0.0f;
  double impurity_decrease = 0.0;
};

// Gini impurity 1 - sum p_c^2. Throws Error{EmptyNode} for (0, 0).
double gini(std::array<std::uint32_t, 2> counts);

// Threshold halfway between two consecutive distinct values, rounded to float
// and kept strictly below `hi` so that `lo <= t < hi` holds in float.
float midpoint_threshold(float lo, float hi);

// Best weighted Gini decrease over midpoint thresholds. Ties go to the lowest
// feature, then the lowest threshold. nullopt when nothing reaches
// min_impurity_decrease or no feature has two distinct values.
std::optional<Split> best_split(std::span<const FeatureVector> features,
                                std::span<const std::uint8_t> labels,
                                const TreeParams& params);

// Deterministic greedy CART. Throws Error{EmptyDataset}.
TreeModel fit_tree(const LabeledDataset& data, const TreeParams& params);

std::uint8_t predict(const TreeModel& tree, const FeatureVector& fv);
// Majority fraction of the reached leaf.
float leaf_score(const TreeModel& tree, const FeatureVector& fv);

struct TreeSizeReport {
  std::size_t node_count = 0;
  std::size_t estimated_source_bytes = 0;
};

TreeSizeReport tree_size(const TreeModel& tree);

std::string tree_to_json(const TreeModel& tree);
// Throws Error{MalformedRow} on schema violations.
TreeModel tree_from_json(const std::string& text);

}  // namespace tinyids
