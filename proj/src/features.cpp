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

#include "tinyids/features.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "tinyids/error.hpp"

namespace tinyids {

CaptureRecord anonymize(CaptureRecord record) {
  record.src_addr.clear();
  record.dst_addr.clear();
  record.src_port.reset();
  record.dst_port.reset();
  record.tick_ms.reset();
  return record;
}

FeatureVector encode(const CaptureRecord& r) {
  FeatureVector fv{};
  fv[kDirectionIn] = r.direction == Direction::In ? 1.0f : 0.0f;
  fv[kProtoTcp] = r.proto.kind == Protocol::Kind::Tcp ? 1.0f : 0.0f;
  fv[kProtoUdp] = r.proto.kind == Protocol::Kind::Udp ? 1.0f : 0.0f;
  fv[kProtoIcmp] = r.proto.kind == Protocol::Kind::Icmp ? 1.0f : 0.0f;
  fv[kFlagSyn] = r.tcp_flags.has(TcpFlags::kSyn) ? 1.0f : 0.0f;
  fv[kFlagAck] = r.tcp_flags.has(TcpFlags::kAck) ? 1.0f : 0.0f;
  fv[kFlagFinOrRst] =
      r.tcp_flags.has(TcpFlags::kFin) || r.tcp_flags.has(TcpFlags::kRst) ? 1.0f
                                                                         : 0.0f;
  if (r.len)
    fv[kLenNorm] = static_cast<float>(
        std::min<double>(*r.len, kLenNormDenominator) / kLenNormDenominator);
  if (r.win) fv[kWinNorm] = static_cast<float>(*r.win / kWinNormDenominator);
  return fv;
}

LabeledDataset encode_dataset(const std::vector<CaptureRecord>& records) {
  LabeledDataset out;
  out.features.reserve(records.size());
  out.labels.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.label == Label::Unlabeled)
      throw Error(Errc::UnlabeledRecord,
                  "record " + std::to_string(i) + " has no label");
    out.features.push_back(encode(r));
    out.labels.push_back(r.label == Label::Anomalous ? 1 : 0);
  }
  return out;
}

void write_encoded_csv(const LabeledDataset& data, std::ostream& out) {
  for (std::size_t j = 0; j < kFeatureCount; ++j) out << (j ? ",f" : "f") << j;
  out << ",label\n";
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(data.features[i][j]));
      out << buf << ',';
    }
    out << static_cast<int>(data.labels[i]) << '\n';
  }
}

void write_encoded_csv(const LabeledDataset& data,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  write_encoded_csv(data, out);
}

}  // namespace tinyids
