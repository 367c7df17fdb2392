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
#include <cmath>
#include <vector>

#include "tinyids/mlp.hpp"
#include "tinyids/rng.hpp"

namespace tinyids::testing {

// Gradients smaller than this in |g| + |g_fd| are compared on an absolute
// scale, where central differences are dominated by rounding.
inline constexpr double kGradFloor = 1e-6;

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max(std::abs(analytic) + std::abs(numeric), kGradFloor);
}

// Central differences are meaningless across the ReLU kink, so examples with
// a hidden pre-activation closer than this to zero are redrawn.
inline constexpr double kKinkMargin = 1e-3;

inline double min_hidden_preactivation(const MlpModel& m, const FeatureVector& fv) {
  std::vector<double> a(fv.begin(), fv.end());
  double closest = 1e300;
  for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
    const auto& layer = m.layers[l];
    std::vector<double> next(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
      double z = layer.biases[o];
      for (std::size_t i = 0; i < layer.in; ++i) z += layer.w(o, i) * a[i];
      closest = std::min(closest, std::abs(z));
      next[o] = z > 0 ? z : 0;
    }
    a = std::move(next);
  }
  return closest;
}

// Random model with nonzero biases and a random batch kept clear of the kink.
struct GradTrial {
  MlpModel model;
  std::vector<Example> batch;
};

inline GradTrial grad_trial(std::uint64_t seed) {
  SplitMix64 rng(seed);
  GradTrial t{init_mlp(MlpArchitecture{}, seed), {}};
  for (auto& layer : t.model.layers)
    for (auto& b : layer.biases) b = rng.uniform(-0.3, 0.3);
  const auto n = rng.uniform_int(1, 16);
  for (std::uint64_t i = 0; i < n; ++i) {
    Example e;
    do {
      for (auto& v : e.fv) v = static_cast<float>(rng.uniform());
    } while (min_hidden_preactivation(t.model, e.fv) < kKinkMargin);
    e.label = static_cast<std::uint8_t>(rng.uniform_int(0, 1));
    t.batch.push_back(e);
  }
  return t;
}

// Largest relative error between backprop and central differences over
// every parameter of the trial.
inline double max_grad_error(const GradTrial& t, double eps) {
  const auto g = gradients(t.model, t.batch);
  auto m = t.model;
  double worst = 0;
  const auto probe = [&](double& p, double analytic) {
    const double saved = p;
    p = saved + eps;
    const double up = mean_loss(m, t.batch);
    p = saved - eps;
    const double down = mean_loss(m, t.batch);
    p = saved;
    worst = std::max(worst, relative_error(analytic, (up - down) / (2 * eps)));
  };
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    for (std::size_t k = 0; k < m.layers[l].weights.size(); ++k)
      probe(m.layers[l].weights[k], g.weights[l][k]);
    for (std::size_t k = 0; k < m.layers[l].biases.size(); ++k)
      probe(m.layers[l].biases[k], g.biases[l][k]);
  }
  return worst;
}

}  // namespace tinyids::testing
