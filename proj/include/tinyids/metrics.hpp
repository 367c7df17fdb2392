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

#include <cstdint>
#include <span>

namespace tinyids {

// Positive class is Anomalous (label 1).
struct ConfusionMatrix {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  double accuracy() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Prf1 {
  double precision = 0, recall = 0, f1 = 0;
};

// Throws Error{LengthMismatch} or Error{EmptyInput}.
ConfusionMatrix confusion(std::span<const std::uint8_t> preds,
                          std::span<const std::uint8_t> labels);

// Any 0/0 ratio is 0.
Prf1 prf1(const ConfusionMatrix& cm);

}  // namespace tinyids
