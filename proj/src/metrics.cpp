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

#include "tinyids/metrics.hpp"

#include "tinyids/error.hpp"

namespace tinyids {

namespace {
double ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }
}  // namespace

double ConfusionMatrix::accuracy() const {
  return ratio(static_cast<double>(tp + tn), static_cast<double>(total()));
}

ConfusionMatrix confusion(std::span<const std::uint8_t> preds,
                          std::span<const std::uint8_t> labels) {
  if (preds.size() != labels.size())
    throw Error(Errc::LengthMismatch, "predictions and labels differ in length");
  if (preds.empty()) throw Error(Errc::EmptyInput, "no predictions to score");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool p = preds[i] != 0;
    const bool y = labels[i] != 0;
    if (p && y) ++cm.tp;
    else if (p) ++cm.fp;
    else if (y) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

Prf1 prf1(const ConfusionMatrix& cm) {
  Prf1 r;
  r.precision = ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fp));
  r.recall = ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fn));
  r.f1 = ratio(2.0 * r.precision * r.recall, r.precision + r.recall);
  return r;
}

}  // namespace tinyids
