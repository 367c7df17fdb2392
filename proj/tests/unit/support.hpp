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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <cstdio>
#include <string>
#include <unistd.h>

#include "tinyids/capture.hpp"
#include "tinyids/rng.hpp"

namespace tinyids::testing {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("tinyids_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string random_ipv4(SplitMix64& rng) {
  return std::to_string(rng.uniform_int(1, 254)) + "." + std::to_string(rng.uniform_int(0, 255)) +
         "." + std::to_string(rng.uniform_int(0, 255)) + "." +
         std::to_string(rng.uniform_int(1, 254));
}

inline std::string random_ipv6(SplitMix64& rng) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "fe80::%x:%x", static_cast<unsigned>(rng.uniform_int(1, 0xffff)),
                static_cast<unsigned>(rng.uniform_int(1, 0xffff)));
  return buf;
}

// Any structurally valid record, with the optional fields switched on and off
// independently. Labels are drawn only when `with_label` is set because the
// netdump line has no label.
inline CaptureRecord random_record(SplitMix64& rng, bool with_label) {
  CaptureRecord r;
  r.direction = rng.uniform() < 0.5 ? Direction::In : Direction::Out;
  r.ip_version = rng.uniform() < 0.8 ? IpVersion::V4 : IpVersion::V6;
  const bool anon = rng.uniform() < 0.15;
  if (!anon) {
    if (r.ip_version == IpVersion::V4) {
      r.src_addr = random_ipv4(rng);
      r.dst_addr = random_ipv4(rng);
    } else {
      r.src_addr = random_ipv6(rng);
      r.dst_addr = random_ipv6(rng);
    }
  }
  switch (rng.uniform_int(0, 3)) {
    case 0: r.proto = Protocol::tcp(); break;
    case 1: r.proto = Protocol::udp(); break;
    case 2: r.proto = Protocol::icmp(); break;
    default: r.proto = Protocol::unknown(static_cast<std::uint8_t>(rng.uniform_int(0, 255)));
  }
  if (r.proto.has_ports() && !anon) {
    r.src_port = static_cast<std::uint16_t>(rng.uniform_int(0, 65535));
    r.dst_port = static_cast<std::uint16_t>(rng.uniform_int(0, 65535));
  }
  if (r.proto.kind == Protocol::Kind::Tcp)
    r.tcp_flags = TcpFlags(static_cast<std::uint8_t>(rng.uniform_int(0, 63)));
  if (rng.uniform() < 0.6) r.len = static_cast<std::uint32_t>(rng.uniform_int(0, 70000));
  if (rng.uniform() < 0.7) {
    r.seq_start = static_cast<std::uint32_t>(rng.next());
    if (rng.uniform() < 0.5) {
      const std::uint32_t span =
          r.len ? *r.len : static_cast<std::uint32_t>(rng.uniform_int(0, 5000));
      r.seq_end = *r.seq_start + span;  // wraps mod 2^32
    }
  }
  if (rng.uniform() < 0.7) r.ack = static_cast<std::uint32_t>(rng.next());
  if (rng.uniform() < 0.7) r.win = static_cast<std::uint16_t>(rng.uniform_int(0, 65535));
  if (with_label) r.label = static_cast<Label>(rng.uniform_int(0, 2));
  return r;
}

inline const char* kTableIvRow1 =
    "out IPv4 10.42.0.71 > 10.42.0.153 TCP 51795 > 1883[.] seq:10339 ack:602218196 win:35";
inline const char* kTableIvRow2 =
    "in IPv4 10.42.0.153 > 10.42.0.71 TCP 1883 > 51795[P.] seq:602218196..602218226 "
    "ack:10339 win:64051 len=30";
inline const char* kMalformedLine = "in IPv4 10.42.0.9 > 10.42.0.71 type(0x6d)";

}  // namespace tinyids::testing
