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
#include <filesystem>
#include <ostream>
#include <vector>

#include "tinyids/capture.hpp"

namespace tinyids {

inline constexpr std::size_t kFeatureCount = 9;

// Fixed encoding consumed by both classifiers:
//   [0] direction is In
//   [1] TCP  [2] UDP  [3] ICMP   (unknown protocols: all zero)
//   [4] SYN  [5] ACK  [6] FIN or RST
//   [7] min(len, 1500) / 1500, 0 when absent
//   [8] win / 65535, 0 when absent
// PSH is not encoded.
using FeatureVector = std::array<float, kFeatureCount>;

enum FeatureIndex : std::size_t {
  kDirectionIn = 0,
  kProtoTcp,
  kProtoUdp,
  kProtoIcmp,
  kFlagSyn,
  kFlagAck,
  kFlagFinOrRst,
  kLenNorm,
  kWinNorm,
};

inline constexpr double kLenNormDenominator = 1500.0;
inline constexpr double kWinNormDenominator = 65535.0;

struct LabeledDataset {
  std::vector<FeatureVector> features;
  std::vector<std::uint8_t> labels;  // 0 = Legit, 1 = Anomalous

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
};

// Drops the endpoints (addresses and ports) plus the arrival tick. Idempotent.
CaptureRecord anonymize(CaptureRecord record);

FeatureVector encode(const CaptureRecord& record);

// Throws Error{UnlabeledRecord} naming the first unlabeled index.
LabeledDataset encode_dataset(const std::vector<CaptureRecord>& records);

// "f0,...,f8,label" with six fractional digits.
void write_encoded_csv(const LabeledDataset& data, std::ostream& out);
void write_encoded_csv(const LabeledDataset& data,
                       const std::filesystem::path& path);

}  // namespace tinyids
