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

#include "tinyids/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tinyids/error.hpp"
#include "tinyids/rng.hpp"

namespace tinyids {

namespace {

constexpr double kClamp = 1e-7;
constexpr std::uint64_t kShuffleSalt = 0x53485546464c45ULL;  // "SHUFFLE"

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double round_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

// Activations of every layer for one input; acts[0] is the input.
struct Trace {
  std::vector<std::vector<double>> pre;   // per layer
  std::vector<std::vector<double>> acts;  // layers + 1
};

Trace run(const MlpModel& model, std::span<const double> input) {
  Trace t;
  t.acts.emplace_back(input.begin(), input.end());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    const auto& x = t.acts.back();
    std::vector<double> z(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
      double s = layer.biases[o];
      for (std::size_t i = 0; i < layer.in; ++i) s += layer.w(o, i) * x[i];
      z[o] = s;
    }
    std::vector<double> a(layer.out);
    const bool last = l + 1 == model.layers.size();
    for (std::size_t o = 0; o < layer.out; ++o)
      a[o] = last ? sigmoid(z[o]) : std::max(0.0, z[o]);
    t.pre.push_back(std::move(z));
    t.acts.push_back(std::move(a));
  }
  return t;
}

std::array<double, kFeatureCount> widen(const FeatureVector& fv) {
  std::array<double, kFeatureCount> x{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) x[i] = fv[i];
  return x;
}

MlpModel shaped(const MlpArchitecture& arch) {
  arch.validate();
  MlpModel m;
  for (std::size_t l = 1; l < arch.layer_sizes.size(); ++l) {
    DenseLayer layer;
    layer.in = arch.layer_sizes[l - 1];
    layer.out = arch.layer_sizes[l];
    layer.weights.assign(layer.in * layer.out, 0.0);
    layer.biases.assign(layer.out, 0.0);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

std::vector<Example> examples_of(const LabeledDataset& data) {
  std::vector<Example> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    out[i] = {data.features[i], data.labels[i]};
  return out;
}

double accuracy_of(const MlpModel& model, std::span<const Example> rows) {
  if (rows.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& e : rows) hit += predict(model, e.fv).cls == e.label;
  return static_cast<double>(hit) / static_cast<double>(rows.size());
}

}  // namespace

void MlpArchitecture::validate() const {
  if (layer_sizes.size() < 2)
    throw Error(Errc::Config, "mlp.layer_sizes needs at least input and output");
  if (layer_sizes.front() != kFeatureCount)
    throw Error(Errc::Config, "mlp input layer must have 9 nodes");
  if (layer_sizes.back() != 2)
    throw Error(Errc::Config, "mlp output layer must have 2 nodes");
  for (const auto s : layer_sizes)
    if (s < 1 || s > 0xffff) throw Error(Errc::Config, "mlp layer size out of range");
}

std::size_t MlpArchitecture::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 1; l < layer_sizes.size(); ++l)
    n += layer_sizes[l] * layer_sizes[l - 1] + layer_sizes[l];
  return n;
}

MlpArchitecture MlpModel::architecture() const {
  MlpArchitecture a;
  a.layer_sizes.clear();
  if (layers.empty()) return a;
  a.layer_sizes.push_back(layers.front().in);
  for (const auto& l : layers) a.layer_sizes.push_back(l.out);
  return a;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.biases.size();
  return n;
}

MlpModel init_mlp(const MlpArchitecture& arch, std::uint64_t seed) {
  MlpModel m = shaped(arch);
  SplitMix64 rng(seed);
  for (auto& layer : m.layers) {
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    for (auto& w : layer.weights) {
      float v = static_cast<float>(rng.uniform(-bound, bound));
      while (std::abs(static_cast<double>(v)) > bound) v = std::nextafter(v, 0.0f);
      w = v;
    }
  }
  return m;
}

MlpModel zero_mlp(const MlpArchitecture& arch) { return shaped(arch); }

MlpOutput forward(const MlpModel& model, std::span<const double> input) {
  if (model.layers.empty() || input.size() != model.layers.front().in ||
      input.size() != kFeatureCount)
    throw Error(Errc::ShapeMismatch, "forward expects a 9-element input, got " +
                                         std::to_string(input.size()));
  const auto t = run(model, input);
  const auto& y = t.acts.back();
  return {y.at(0), y.at(1)};
}

MlpOutput forward(const MlpModel& model, const FeatureVector& fv) {
  const auto x = widen(fv);
  return forward(model, std::span<const double>(x));
}

double loss(const MlpOutput& out, std::uint8_t label) {
  double total = 0;
  for (std::size_t j = 0; j < 2; ++j) {
    const double target = (label ? 1u : 0u) == j ? 1.0 : 0.0;
    const double y = std::clamp(out[j], kClamp, 1.0 - kClamp);
    total += -(target * std::log(y) + (1.0 - target) * std::log(1.0 - y));
  }
  return total / 2.0;
}

double mean_loss(const MlpModel& model, std::span<const Example> batch) {
  if (batch.empty()) throw Error(Errc::EmptyInput, "empty batch");
  double s = 0;
  for (const auto& e : batch) s += loss(forward(model, e.fv), e.label);
  return s / static_cast<double>(batch.size());
}

MlpGradients gradients(const MlpModel& model, std::span<const Example> batch) {
  if (batch.empty()) throw Error(Errc::EmptyInput, "empty batch");
  MlpGradients g;
  for (const auto& l : model.layers) {
    g.weights.emplace_back(l.weights.size(), 0.0);
    g.biases.emplace_back(l.biases.size(), 0.0);
  }
  const std::size_t depth = model.layers.size();
  for (const auto& e : batch) {
    const auto x = widen(e.fv);
    const auto t = run(model, x);

    // d(loss)/d(z) at the output: 0.5 * (y - target), zero where clamped.
    const auto& y = t.acts.back();
    std::vector<double> delta(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double target = (e.label ? 1u : 0u) == j ? 1.0 : 0.0;
      const bool clamped = y[j] < kClamp || y[j] > 1.0 - kClamp;
      delta[j] = clamped ? 0.0 : 0.5 * (y[j] - target);
    }
    for (std::size_t l = depth; l-- > 0;) {
      const auto& layer = model.layers[l];
      const auto& in = t.acts[l];
      for (std::size_t o = 0; o < layer.out; ++o) {
        g.biases[l][o] += delta[o];
        for (std::size_t i = 0; i < layer.in; ++i)
          g.weights[l][o * layer.in + i] += delta[o] * in[i];
      }
      if (l == 0) break;
      std::vector<double> prev(layer.in, 0.0);
      const auto& z_prev = t.pre[l - 1];
      for (std::size_t i = 0; i < layer.in; ++i) {
        if (!(z_prev[i] > 0.0)) continue;
        double s = 0;
        for (std::size_t o = 0; o < layer.out; ++o) s += layer.w(o, i) * delta[o];
        prev[i] = s;
      }
      delta = std::move(prev);
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (auto& v : g.weights)
    for (auto& x : v) x *= inv;
  for (auto& v : g.biases)
    for (auto& x : v) x *= inv;
  return g;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw Error(Errc::Config, "train.learning_rate must be > 0");
  if (batch_size < 1) throw Error(Errc::Config, "train.batch_size must be >= 1");
  if (!(holdout_fraction > 0 && holdout_fraction < 1))
    throw Error(Errc::Config, "train.holdout_fraction must be in (0, 1)");
}

void TrainReport::write_curve_csv(std::ostream& out) const {
  out << "epoch,train_acc,holdout_acc\n";
  char buf[96];
  for (std::size_t e = 0; e < train_accuracy.size(); ++e) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f\n", e + 1, train_accuracy[e],
                  holdout_accuracy[e]);
    out << buf;
  }
}

SplitIndices stratified_indices(std::span<const std::uint8_t> labels,
                                double holdout_fraction, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] ? 1 : 0].push_back(i);
  SplitMix64 rng(seed);
  SplitIndices out;
  for (auto& idx : by_class) {
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[rng.uniform_int(0, i - 1)]);
    const auto k = static_cast<std::size_t>(
        std::llround(holdout_fraction * static_cast<double>(idx.size())));
    for (std::size_t j = 0; j < idx.size(); ++j) (j < k ? out.holdout : out.train).push_back(idx[j]);
  }
  return out;
}

DatasetSplit stratified_split(const LabeledDataset& data, double holdout_fraction,
                              std::uint64_t seed) {
  const auto idx = stratified_indices(data.labels, holdout_fraction, seed);
  DatasetSplit out;
  const auto take = [&](const std::vector<std::size_t>& rows, LabeledDataset& part) {
    for (const auto i : rows) {
      part.features.push_back(data.features[i]);
      part.labels.push_back(data.labels[i]);
    }
  };
  take(idx.train, out.train);
  take(idx.holdout, out.holdout);
  return out;
}

std::pair<MlpModel, TrainReport> train_mlp(const LabeledDataset& data,
                                           const MlpArchitecture& arch,
                                           const TrainConfig& cfg) {
  cfg.validate();
  auto split = stratified_split(data, cfg.holdout_fraction, cfg.seed);
  return train_mlp(split.train, split.holdout, arch, cfg);
}

std::pair<MlpModel, TrainReport> train_mlp(const LabeledDataset& train,
                                           const LabeledDataset& holdout,
                                           const MlpArchitecture& arch,
                                           const TrainConfig& cfg) {
  cfg.validate();
  arch.validate();
  if (train.empty()) throw Error(Errc::EmptyDataset, "no training rows");
  const auto positives = std::count(train.labels.begin(), train.labels.end(), 1);
  if (positives == 0 || static_cast<std::size_t>(positives) == train.size())
    throw Error(Errc::SingleClassDataset,
                "training split must contain both Legit and Anomalous rows");

  MlpModel model = init_mlp(arch, cfg.seed);
  TrainReport report;
  const auto rows = examples_of(train);
  const auto held = examples_of(holdout);
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(cfg.seed ^ kShuffleSalt);
  std::vector<Example> batch;
  batch.reserve(cfg.batch_size);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.uniform_int(0, i - 1)]);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      batch.clear();
      const auto end = std::min(order.size(), start + cfg.batch_size);
      for (std::size_t k = start; k < end; ++k) batch.push_back(rows[order[k]]);
      const auto g = gradients(model, batch);
      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto& layer = model.layers[l];
        for (std::size_t k = 0; k < layer.weights.size(); ++k)
          layer.weights[k] = round_f32(layer.weights[k] - cfg.learning_rate * g.weights[l][k]);
        for (std::size_t k = 0; k < layer.biases.size(); ++k)
          layer.biases[k] = round_f32(layer.biases[k] - cfg.learning_rate * g.biases[l][k]);
      }
    }
    report.train_accuracy.push_back(accuracy_of(model, rows));
    report.holdout_accuracy.push_back(accuracy_of(model, held));
    report.train_loss.push_back(mean_loss(model, rows));
  }

  if (!held.empty()) {
    std::vector<std::uint8_t> preds;
    preds.reserve(held.size());
    for (const auto& e : held) preds.push_back(predict(model, e.fv).cls);
    report.holdout_confusion = confusion(preds, holdout.labels);
    report.holdout_prf1 = prf1(report.holdout_confusion);
  }
  return {std::move(model), std::move(report)};
}

MlpPrediction predict_outputs(const MlpOutput& out) {
  const std::uint8_t cls = out[1] > out[0] ? 1 : 0;
  return {cls, out[cls]};
}

MlpPrediction predict(const MlpModel& model, const FeatureVector& fv) {
  return predict_outputs(forward(model, fv));
}

}  // namespace tinyids
