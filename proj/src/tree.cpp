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

#include "tinyids/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "tinyids/error.hpp"
#include "tinyids/export.hpp"

namespace tinyids {

namespace {

// Decreases closer than this are ties and fall back to the ordering rule.
constexpr double kTieEpsilon = 1e-12;

std::array<std::uint32_t, 2> count_labels(std::span<const std::uint8_t> labels,
                                          std::span<const std::size_t> idx) {
  std::array<std::uint32_t, 2> c{0, 0};
  for (const auto i : idx) ++c[labels[i] ? 1 : 0];
  return c;
}

std::optional<Split> best_split_over(std::span<const FeatureVector> features,
                                     std::span<const std::uint8_t> labels,
                                     std::span<const std::size_t> idx,
                                     const TreeParams& params) {
  const auto total = count_labels(labels, idx);
  const double n = static_cast<double>(idx.size());
  const double parent = gini(total);

  std::optional<Split> best;
  std::vector<std::size_t> order(idx.begin(), idx.end());
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return features[a][f] < features[b][f];
    });
    std::array<std::uint32_t, 2> left{0, 0};
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      ++left[labels[order[k]] ? 1 : 0];
      const float lo = features[order[k]][f];
      const float hi = features[order[k + 1]][f];
      if (!(lo < hi)) continue;
      const std::array<std::uint32_t, 2> right{total[0] - left[0],
                                               total[1] - left[1]};
      const double nl = static_cast<double>(k + 1);
      const double nr = n - nl;
      const double decrease =
          parent - (nl / n) * gini(left) - (nr / n) * gini(right);
      if (!best || decrease > best->impurity_decrease + kTieEpsilon)
        best = Split{f, midpoint_threshold(lo, hi), decrease};
    }
  }
  if (!best || best->impurity_decrease < params.min_impurity_decrease)
    return std::nullopt;
  return best;
}

class Builder {
 public:
  Builder(const LabeledDataset& data, const TreeParams& params)
      : data_(data), params_(params) {}

  TreeModel build() {
    std::vector<std::size_t> idx(data_.size());
    std::iota(idx.begin(), idx.end(), 0);
    grow(idx, 0);
    return std::move(model_);
  }

 private:
  std::int32_t grow(std::vector<std::size_t> idx, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(model_.nodes.size());
    model_.nodes.emplace_back();
    const auto counts = count_labels(data_.labels, idx);

    std::optional<Split> split;
    const bool pure = counts[0] == 0 || counts[1] == 0;
    if (!pure && depth < params_.max_depth &&
        idx.size() >= params_.min_samples_split)
      split = best_split_over(data_.features, data_.labels, idx, params_);

    if (!split) {
      auto& leaf = model_.nodes[id];
      leaf.class_counts = counts;
      leaf.cls = counts[1] > counts[0] ? 1 : 0;
      return id;
    }

    std::vector<std::size_t> left, right;
    for (const auto i : idx) {
      if (data_.features[i][split->feature] <= split->threshold)
        left.push_back(i);
      else
        right.push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    const auto l = grow(std::move(left), depth + 1);
    const auto r = grow(std::move(right), depth + 1);
    auto& node = model_.nodes[id];
    node.feature = static_cast<std::uint8_t>(split->feature);
    node.threshold = split->threshold;
    node.left = l;
    node.right = r;
    node.class_counts = counts;
    node.cls = counts[1] > counts[0] ? 1 : 0;
    return id;
  }

  const LabeledDataset& data_;
  const TreeParams& params_;
  TreeModel model_;
};

const TreeNode& reach_leaf(const TreeModel& tree, const FeatureVector& fv) {
  std::size_t i = 0;
  while (!tree.nodes[i].is_leaf()) {
    const auto& n = tree.nodes[i];
    i = static_cast<std::size_t>(fv[n.feature] <= n.threshold ? n.left : n.right);
  }
  return tree.nodes[i];
}

}  // namespace

void TreeParams::validate() const {
  if (min_samples_split < 2)
    throw Error(Errc::Config, "tree.min_samples_split must be >= 2");
  if (!(min_impurity_decrease >= 0.0))
    throw Error(Errc::Config, "tree.min_impurity_decrease must be >= 0");
}

double gini(std::array<std::uint32_t, 2> counts) {
  const double n = static_cast<double>(counts[0]) + counts[1];
  if (n == 0) throw Error(Errc::EmptyNode, "gini of an empty node");
  const double p0 = counts[0] / n;
  const double p1 = counts[1] / n;
  return 1.0 - (p0 * p0 + p1 * p1);
}

float midpoint_threshold(float lo, float hi) {
  float t = static_cast<float>((static_cast<double>(lo) + hi) / 2.0);
  if (!(t < hi)) t = lo;
  return t;
}

std::optional<Split> best_split(std::span<const FeatureVector> features,
                                std::span<const std::uint8_t> labels,
                                const TreeParams& params) {
  if (features.size() != labels.size())
    throw Error(Errc::ShapeMismatch, "features and labels differ in length");
  if (features.empty()) return std::nullopt;
  std::vector<std::size_t> idx(features.size());
  std::iota(idx.begin(), idx.end(), 0);
  return best_split_over(features, labels, idx, params);
}

TreeModel fit_tree(const LabeledDataset& data, const TreeParams& params) {
  params.validate();
  if (data.empty()) throw Error(Errc::EmptyDataset, "cannot fit a tree on 0 rows");
  if (data.features.size() != data.labels.size())
    throw Error(Errc::ShapeMismatch, "features and labels differ in length");
  return Builder(data, params).build();
}

std::uint8_t predict(const TreeModel& tree, const FeatureVector& fv) {
  return reach_leaf(tree, fv).cls;
}

float leaf_score(const TreeModel& tree, const FeatureVector& fv) {
  const auto& leaf = reach_leaf(tree, fv);
  const double total =
      static_cast<double>(leaf.class_counts[0]) + leaf.class_counts[1];
  if (total == 0) return 1.0f;
  return static_cast<float>(leaf.class_counts[leaf.cls] / total);
}

std::size_t TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes[i].is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
    }
  }
  return best;
}

std::string TreeModel::check() const {
  if (nodes.empty()) return "tree has no nodes";
  std::vector<int> seen(nodes.size(), 0);
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    if (seen[i]++) return "node " + std::to_string(i) + " reached twice";
    const auto& n = nodes[i];
    if (n.left == TreeNode::kNone) {
      if (n.right != TreeNode::kNone)
        return "node " + std::to_string(i) + " has one child";
      if (n.cls > 1) return "leaf class out of range";
      continue;
    }
    if (n.feature >= kFeatureCount) return "feature index out of range";
    for (const auto c : {n.left, n.right}) {
      if (c <= 0 || static_cast<std::size_t>(c) >= nodes.size())
        return "child id out of range at node " + std::to_string(i);
      stack.push_back(static_cast<std::size_t>(c));
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    return "unreachable nodes";
  return {};
}

TreeSizeReport tree_size(const TreeModel& tree) {
  return {tree.nodes.size(), tree.nodes.size() * kTreeSourceBytesPerNode};
}

std::string tree_to_json(const TreeModel& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    nlohmann::json j;
    j["id"] = i;
    if (n.is_leaf()) {
      j["class"] = n.cls;
      j["class_counts"] = {n.class_counts[0], n.class_counts[1]};
    } else {
      j["feature_index"] = n.feature;
      j["threshold"] = static_cast<double>(n.threshold);
      j["left"] = n.left;
      j["right"] = n.right;
      j["class_counts"] = {n.class_counts[0], n.class_counts[1]};
    }
    nodes.push_back(std::move(j));
  }
  return nlohmann::json{{"kind", "tids-tree"}, {"nodes", std::move(nodes)}}.dump(1) + "\n";
}

TreeModel tree_from_json(const std::string& text) {
  TreeModel tree;
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto& nodes = doc.at("nodes");
    tree.nodes.resize(nodes.size());
    for (const auto& j : nodes) {
      const auto id = j.at("id").get<std::size_t>();
      if (id >= tree.nodes.size()) throw Error(Errc::MalformedRow, "node id out of range");
      auto& n = tree.nodes[id];
      const auto counts = j.at("class_counts").get<std::array<std::uint32_t, 2>>();
      n.class_counts = counts;
      if (j.contains("feature_index")) {
        n.feature = j.at("feature_index").get<std::uint8_t>();
        n.threshold = static_cast<float>(j.at("threshold").get<double>());
        n.left = j.at("left").get<std::int32_t>();
        n.right = j.at("right").get<std::int32_t>();
        n.cls = counts[1] > counts[0] ? 1 : 0;
      } else {
        n.cls = j.at("class").get<std::uint8_t>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedRow, std::string("tree JSON: ") + e.what());
  }
  if (const auto why = tree.check(); !why.empty())
    throw Error(Errc::MalformedRow, "tree JSON: " + why);
  return tree;
}

}  // namespace tinyids
