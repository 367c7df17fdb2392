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

#include "tinyids/synth.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "tinyids/error.hpp"
#include "tinyids/rng.hpp"

namespace tinyids {

namespace {

constexpr char kDevice[] = "10.42.0.71";
constexpr char kBroker[] = "10.42.0.153";
constexpr char kAttacker[] = "10.42.0.9";
constexpr char kRelay[] = "10.42.0.66";
constexpr std::uint16_t kClientPort = 51795;
constexpr std::uint16_t kMqttPort = 1883;

constexpr std::uint64_t kScheduleSalt = 0x5343484544ULL;
constexpr std::uint64_t kBenignSalt = 0x42454e49474eULL;
constexpr std::uint64_t kAttackSalt = 0x41545441434bULL;
constexpr std::uint64_t kAmbientSalt = 0x414d4249454eULL;

CaptureRecord tcp(Direction dir, const char* src, const char* dst,
                  std::uint16_t sport, std::uint16_t dport, TcpFlags flags) {
  CaptureRecord r;
  r.direction = dir;
  r.src_addr = src;
  r.dst_addr = dst;
  r.proto = Protocol::tcp();
  r.src_port = sport;
  r.dst_port = dport;
  r.tcp_flags = flags;
  return r;
}

constexpr TcpFlags kPshAck = TcpFlags{}.with(TcpFlags::kPsh).with(TcpFlags::kAck);
constexpr TcpFlags kAckOnly = TcpFlags{}.with(TcpFlags::kAck);
constexpr TcpFlags kSynOnly = TcpFlags{}.with(TcpFlags::kSyn);

std::uint16_t u16(SplitMix64& rng, std::uint64_t lo, std::uint64_t hi) {
  return static_cast<std::uint16_t>(rng.uniform_int(lo, hi));
}
std::uint32_t u32(SplitMix64& rng) { return static_cast<std::uint32_t>(rng.next()); }

std::uint64_t jittered(SplitMix64& rng, std::uint64_t nominal, std::uint64_t period) {
  const double j = rng.uniform(-0.1, 0.1) * static_cast<double>(period);
  const double t = static_cast<double>(nominal) + j;
  return t <= 0 ? 0 : static_cast<std::uint64_t>(std::llround(t));
}

}  // namespace

const char* to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::UdpFlood: return "UdpFlood";
    case AttackKind::TcpFlood: return "TcpFlood";
    case AttackKind::SynFlood: return "SynFlood";
    case AttackKind::PingOfDeath: return "PingOfDeath";
    case AttackKind::Mitm: return "Mitm";
  }
  return "?";
}

AttackKind attack_kind_from_string(const std::string& name) {
  for (const auto k : {AttackKind::UdpFlood, AttackKind::TcpFlood, AttackKind::SynFlood,
                       AttackKind::PingOfDeath, AttackKind::Mitm})
    if (name == to_string(k)) return k;
  throw Error(Errc::Config, "unknown attack kind '" + name + "'");
}

std::vector<AttackSpec> default_attack_mix() {
  return {
      {AttackKind::SynFlood, 1000, 250, 1},
      {AttackKind::UdpFlood, 500, 100, 1},
      {AttackKind::TcpFlood, 500, 100, 1},
      {AttackKind::PingOfDeath, 10, 2000, 1},
      {AttackKind::Mitm, 5, 4000, 1},
  };
}

std::uint64_t TrafficScenario::effective_duration_ms() const {
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(duration_ms) * scale));
}

void TrafficScenario::validate() const {
  if (duration_ms == 0) throw Error(Errc::Config, "scenario.duration_ms must be > 0");
  if (!(scale > 0 && scale <= 1)) throw Error(Errc::Config, "scenario.scale must be in (0, 1]");
  if (benign.telemetry_period_ms == 0 && benign.keepalive_period_ms == 0)
    throw Error(Errc::Config, "scenario needs at least one benign stream");
  if (!(benign.ambient_pps >= 0)) throw Error(Errc::Config, "benign.ambient_pps must be >= 0");
  for (const auto& a : attacks)
    if (!(a.rate_pps > 0)) throw Error(Errc::Config, "attack rate_pps must be > 0");
}

std::vector<AttackEpisode> schedule_attacks(const TrafficScenario& scenario) {
  scenario.validate();
  const auto total = scenario.effective_duration_ms();
  SplitMix64 rng(scenario.seed ^ kScheduleSalt);
  std::vector<AttackEpisode> out;
  for (const auto& spec : scenario.attacks) {
    const auto length = std::min(spec.duration_ms, total);
    for (std::uint32_t c = 0; c < spec.count; ++c)
      out.push_back({spec.kind, rng.uniform_int(0, total - length), length, spec.rate_pps});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.start_ms < b.start_ms;
  });
  return out;
}

std::vector<CaptureRecord> gen_benign(const TrafficScenario& scenario) {
  const auto total = scenario.effective_duration_ms();
  SplitMix64 rng(scenario.seed ^ kBenignSalt);

  enum class Event { Publish, Keepalive };
  std::vector<std::pair<std::uint64_t, Event>> events;
  const auto telemetry = scenario.benign.telemetry_period_ms;
  const auto keepalive = scenario.benign.keepalive_period_ms;
  if (telemetry > 0)
    for (std::uint64_t t = 0; t < total; t += telemetry)
      events.emplace_back(jittered(rng, t, telemetry), Event::Publish);
  if (keepalive > 0)
    for (std::uint64_t t = keepalive; t < total; t += keepalive)
      events.emplace_back(jittered(rng, t, keepalive), Event::Keepalive);
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::uint32_t device_seq = 10339;
  std::uint32_t broker_seq = 602218196;
  std::vector<CaptureRecord> out;
  for (const auto& [tick, kind] : events) {
    if (tick >= total) continue;
    const std::uint32_t len =
        kind == Event::Publish ? static_cast<std::uint32_t>(rng.uniform_int(20, 40)) : 2;
    auto req = tcp(Direction::Out, kDevice, kBroker, kClientPort, kMqttPort, kPshAck);
    req.seq_start = device_seq;
    req.seq_end = device_seq + len;
    req.ack = broker_seq;
    req.win = u16(rng, 5600, 5760);
    req.len = len;
    req.tick_ms = tick;
    device_seq += len;

    const auto reply_tick = tick + rng.uniform_int(5, 30);
    auto reply = tcp(Direction::In, kBroker, kDevice, kMqttPort, kClientPort,
                     kind == Event::Publish ? kAckOnly : kPshAck);
    if (kind == Event::Publish) {
      reply.seq_start = broker_seq;
    } else {
      reply.seq_start = broker_seq;
      reply.seq_end = broker_seq + 2;
      reply.len = 2;
      broker_seq += 2;
    }
    reply.ack = device_seq;
    reply.win = u16(rng, 64000, 64240);
    reply.tick_ms = reply_tick;

    req.label = reply.label = Label::Legit;
    out.push_back(std::move(req));
    if (reply_tick < total) out.push_back(std::move(reply));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return *a.tick_ms < *b.tick_ms;
  });
  return out;
}

std::vector<CaptureRecord> gen_ambient(const TrafficScenario& scenario) {
  std::vector<CaptureRecord> out;
  const double rate = scenario.benign.ambient_pps;
  if (!(rate > 0)) return out;
  const auto total = scenario.effective_duration_ms();
  SplitMix64 rng(scenario.seed ^ kAmbientSalt);
  static constexpr const char* kPeers[] = {"10.42.0.1", "10.42.0.23", "10.42.0.24",
                                           "10.42.0.31", "10.42.0.32"};
  double t = 0;
  for (;;) {
    t += -std::log1p(-rng.uniform()) * 1000.0 / rate;
    const auto tick = static_cast<std::uint64_t>(t);
    if (tick >= total) break;
    const char* peer = kPeers[rng.uniform_int(0, std::size(kPeers) - 1)];
    CaptureRecord r;
    r.direction = Direction::In;
    r.src_addr = peer;
    r.tick_ms = tick;
    r.label = Label::Legit;
    if (rng.uniform() < 0.75) {
      const bool mdns = rng.uniform() < 0.5;
      r.dst_addr = mdns ? "224.0.0.251" : "239.255.255.250";
      r.proto = Protocol::udp();
      r.src_port = mdns ? 5353 : u16(rng, 32768, 60999);
      r.dst_port = mdns ? 5353 : 1900;
      r.len = static_cast<std::uint32_t>(rng.uniform_int(40, 480));
      out.push_back(std::move(r));
    } else {
      r.dst_addr = kDevice;
      r.proto = Protocol::icmp();
      r.len = static_cast<std::uint32_t>(rng.uniform_int(8, 64));
      auto reply = r;
      reply.direction = Direction::Out;
      reply.src_addr = kDevice;
      reply.dst_addr = peer;
      reply.tick_ms = tick + rng.uniform_int(1, 4);
      out.push_back(std::move(r));
      if (*reply.tick_ms < total) out.push_back(std::move(reply));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return *a.tick_ms < *b.tick_ms;
  });
  return out;
}

std::vector<CaptureRecord> gen_attack(const AttackEpisode& ep, std::uint64_t seed) {
  SplitMix64 rng(seed ^ kAttackSalt);
  std::vector<CaptureRecord> out;
  const auto n = static_cast<std::uint64_t>(
      std::floor(ep.rate_pps * static_cast<double>(ep.duration_ms) / 1000.0));
  const auto end = ep.start_ms + ep.duration_ms;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto tick = ep.start_ms + static_cast<std::uint64_t>(
                                        std::floor(static_cast<double>(i) * 1000.0 / ep.rate_pps));
    if (tick >= end) break;
    switch (ep.kind) {
      case AttackKind::UdpFlood: {
        CaptureRecord r;
        r.direction = Direction::In;
        r.src_addr = kAttacker;
        r.dst_addr = kDevice;
        r.proto = Protocol::udp();
        r.src_port = u16(rng, 1024, 65535);
        r.dst_port = u16(rng, 1024, 65535);
        r.len = static_cast<std::uint32_t>(rng.uniform_int(0, 1472));
        r.tick_ms = tick;
        out.push_back(std::move(r));
        break;
      }
      case AttackKind::TcpFlood: {
        auto r = tcp(Direction::In, kAttacker, kDevice, u16(rng, 1024, 65535), kMqttPort,
                     kAckOnly);
        r.seq_start = u32(rng);
        r.ack = u32(rng);
        r.win = u16(rng, 0, 4096);
        r.tick_ms = tick;
        out.push_back(std::move(r));
        break;
      }
      case AttackKind::SynFlood: {
        auto r = tcp(Direction::In, kAttacker, kDevice, u16(rng, 1024, 65535), kMqttPort,
                     kSynOnly);
        r.seq_start = u32(rng);
        r.win = u16(rng, 0, 1024);
        r.tick_ms = tick;
        out.push_back(std::move(r));
        break;
      }
      case AttackKind::PingOfDeath: {
        CaptureRecord r;
        r.direction = Direction::In;
        r.src_addr = kAttacker;
        r.dst_addr = kDevice;
        r.proto = Protocol::icmp();
        r.len = static_cast<std::uint32_t>(rng.uniform_int(65000, 65500));
        r.tick_ms = tick;
        out.push_back(std::move(r));
        break;
      }
      case AttackKind::Mitm: {
        // The same segment seen twice: once spoofed as the broker, once from
        // the relaying host.
        const auto len = static_cast<std::uint32_t>(rng.uniform_int(20, 40));
        auto r = tcp(Direction::In, kBroker, kDevice, kMqttPort, kClientPort, kPshAck);
        r.seq_start = u32(rng);
        r.seq_end = *r.seq_start + len;
        r.ack = u32(rng);
        r.win = u16(rng, 29000, 29300);
        r.len = len;
        r.tick_ms = tick;
        auto relayed = r;
        relayed.src_addr = kRelay;
        relayed.tick_ms = tick + rng.uniform_int(1, 5);
        out.push_back(std::move(r));
        if (*relayed.tick_ms < end) out.push_back(std::move(relayed));
        break;
      }
    }
  }
  for (auto& r : out) r.label = Label::Anomalous;
  return out;
}

SynthResult synthesize(const TrafficScenario& scenario) {
  SynthResult res;
  res.episodes = schedule_attacks(scenario);
  res.records = gen_benign(scenario);
  {
    auto ambient = gen_ambient(scenario);
    res.records.insert(res.records.end(), std::make_move_iterator(ambient.begin()),
                       std::make_move_iterator(ambient.end()));
  }
  for (std::size_t i = 0; i < res.episodes.size(); ++i) {
    auto part = gen_attack(res.episodes[i], scenario.seed + (i + 1) * 0x9e3779b97f4a7c15ULL);
    res.records.insert(res.records.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
  }
  std::stable_sort(res.records.begin(), res.records.end(),
                   [](const auto& a, const auto& b) { return *a.tick_ms < *b.tick_ms; });
  if (!res.records.empty()) {
    const auto bad = std::count_if(res.records.begin(), res.records.end(), [](const auto& r) {
      return r.label == Label::Anomalous;
    });
    res.anomalous_fraction =
        static_cast<double>(bad) / static_cast<double>(res.records.size());
  }
  return res;
}

}  // namespace tinyids
