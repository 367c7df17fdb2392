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
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "tinyids/features.hpp"
#include "tinyids/metrics.hpp"

namespace tinyids {

// ReLU hidden layers, elementwise sigmoid on the 2-node output layer.
struct MlpArchitecture {
  std::vector<std::size_t> layer_sizes{9, 8, 7, 5, 3, 2};

  // Throws Error{Config} unless first = 9, last = 2 and all sizes >= 1.
  void validate() const;
  std::size_t parameter_count() const;
};

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> biases;   // out

  double& w(std::size_t o, std::size_t i) { return weights[o * in + i]; }
  double w(std::size_t o, std::size_t i) const { return weights[o * in + i]; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Parameters are held in double for backprop but every value produced by
// init_mlp / train_mlp is exactly representable in f32, so the binary export
// is lossless.
struct MlpModel {
  std::vector<DenseLayer> layers;

  MlpArchitecture architecture() const;
  std::size_t parameter_count() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

// Xavier-uniform weights from a SplitMix64 stream, zero biases.
MlpModel init_mlp(const MlpArchitecture& arch, std::uint64_t seed);

// Zero weights and biases; outputs (0.5, 0.5) everywhere.
MlpModel zero_mlp(const MlpArchitecture& arch);

using MlpOutput = std::array<double, 2>;

// Throws Error{ShapeMismatch} when input.size() != 9.
MlpOutput forward(const MlpModel& model, std::span<const double> input);
MlpOutput forward(const MlpModel& model, const FeatureVector& fv);

// Mean binary cross-entropy over the two outputs against the one-hot target
// of `label`, with outputs clamped to [1e-7, 1 - 1e-7].
double loss(const MlpOutput& out, std::uint8_t label);

struct MlpGradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

struct Example {
  FeatureVector fv;
  std::uint8_t label = 0;
};

// Gradient of the batch-mean loss. ReLU'(0) = 0. Throws Error{EmptyInput}.
MlpGradients gradients(const MlpModel& model, std::span<const Example> batch);

double mean_loss(const MlpModel& model, std::span<const Example> batch);

struct TrainConfig {
  std::size_t epochs = 200;
  double learning_rate = 0.05;
  std::size_t batch_size = 32;
  std::uint64_t seed = 7;
  double holdout_fraction = 0.2;

  void validate() const;
};

struct TrainReport {
  std::vector<double> train_accuracy;
  std::vector<double> holdout_accuracy;
  std::vector<double> train_loss;  // mean training loss after each epoch
  ConfusionMatrix holdout_confusion;
  Prf1 holdout_prf1;

  // "epoch,train_acc,holdout_acc", epochs numbered from 1.
  void write_curve_csv(std::ostream& out) const;
};

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset holdout;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> holdout;
};

// Per-class seeded shuffle of row indices; round(fraction * n_c) of each
// class go to the holdout, class 0 first, each class in shuffled order.
SplitIndices stratified_indices(std::span<const std::uint8_t> labels,
                                double holdout_fraction, std::uint64_t seed);

// stratified_indices applied to a dataset. Per-class seeded shuffle; round(fraction * n_c) rows of each class go to the
// holdout. Row order inside each part follows the shuffled order.
DatasetSplit stratified_split(const LabeledDataset& data, double holdout_fraction,
                         std::uint64_t seed);

// Splits with stratified_split(cfg.holdout_fraction, cfg.seed), then trains.
std::pair<MlpModel, TrainReport> train_mlp(const LabeledDataset& data,
                                           const MlpArchitecture& arch,
                                           const TrainConfig& cfg);

// Minibatch SGD with a seeded per-epoch reshuffle. Throws
// Error{SingleClassDataset} if the training part lacks either class.
std::pair<MlpModel, TrainReport> train_mlp(const LabeledDataset& train,
                                           const LabeledDataset& holdout,
                                           const MlpArchitecture& arch,
                                           const TrainConfig& cfg);

struct MlpPrediction {
  std::uint8_t cls = 0;
  double score = 0.5;
};

// argmax of the two outputs, ties to class 0.
MlpPrediction predict(const MlpModel& model, const FeatureVector& fv);
MlpPrediction predict_outputs(const MlpOutput& out);

}  // namespace tinyids
