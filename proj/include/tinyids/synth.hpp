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
#include <string>
#include <vector>

#include "tinyids/capture.hpp"

namespace tinyids {

enum class AttackKind : std::uint8_t { UdpFlood, TcpFlood, SynFlood, PingOfDeath, Mitm };

const char* to_string(AttackKind kind);
// Throws Error{Config} for unknown names.
AttackKind attack_kind_from_string(const std::string& name);

struct AttackSpec {
  AttackKind kind = AttackKind::SynFlood;
  double rate_pps = 1000;
  std::uint64_t duration_ms = 250;
  std::uint32_t count = 1;  // episodes over the scenario
};

struct BenignSpec {
  std::uint64_t telemetry_period_ms = 1000;
  std::uint64_t keepalive_period_ms = 15000;
  // Background LAN chatter from the other nodes sharing the access point
  // (mDNS/SSDP multicast, echo probes). 0 disables it.
  double ambient_pps = 0.5;
};

// One of each attack, sized so that a 2% slice of a virtual day carries a
// small anomalous minority and the SYN flood clears the default rate filter.
std::vector<AttackSpec> default_attack_mix();

struct TrafficScenario {
  std::uint64_t seed = 7;
  std::uint64_t duration_ms = 86'400'000;
  BenignSpec benign;
  std::vector<AttackSpec> attacks = default_attack_mix();
  // Compresses the virtual duration; packet rates are unchanged.
  double scale = 1.0;

  std::uint64_t effective_duration_ms() const;
  void validate() const;
};

struct AttackEpisode {
  AttackKind kind = AttackKind::SynFlood;
  std::uint64_t start_ms = 0;
  std::uint64_t duration_ms = 0;
  double rate_pps = 0;

  friend bool operator==(const AttackEpisode&, const AttackEpisode&) = default;
};

// `count` uniformly placed episodes per spec, sorted by start. Episodes may
// overlap. An episode longer than the scenario is truncated to fit.
std::vector<AttackEpisode> schedule_attacks(const TrafficScenario& scenario);

// Device publishing MQTT telemetry to its broker: per period an outbound
// PSH+ACK publish and the broker's ACK, plus a PINGREQ/PINGRESP pair per
// keepalive period. Ticks are jittered by up to 10% of the period.
std::vector<CaptureRecord> gen_benign(const TrafficScenario& scenario);

// Poisson stream of inbound multicast UDP announcements (len 40-480) and
// ICMP echo probes (len 8-64) answered by the device, all labeled Legit.
std::vector<CaptureRecord> gen_ambient(const TrafficScenario& scenario);

// Inbound attack packets at the episode's rate, all labeled Anomalous.
std::vector<CaptureRecord> gen_attack(const AttackEpisode& episode, std::uint64_t seed);

struct SynthResult {
  std::vector<CaptureRecord> records;  // stably sorted by tick_ms
  std::vector<AttackEpisode> episodes;
  double anomalous_fraction = 0;
};

SynthResult synthesize(const TrafficScenario& scenario);

}  // namespace tinyids
