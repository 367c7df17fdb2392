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

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "tinyids/error.hpp"
#include "tinyids/features.hpp"
#include "tinyids/filter.hpp"
#include "tinyids/hash.hpp"
#include "tinyids/synth.hpp"

using namespace tinyids;

namespace {

TrafficScenario quiet(std::uint64_t duration_ms) {
  TrafficScenario sc;
  sc.duration_ms = duration_ms;
  sc.attacks.clear();
  sc.benign.ambient_pps = 0;
  return sc;
}

std::string csv_of(const std::vector<CaptureRecord>& recs) {
  std::ostringstream out;
  write_csv(recs, out);
  return out.str();
}

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("ten seconds of telemetry is about twenty records") {
    const auto recs = gen_benign(quiet(10'000));
    CHECK(recs.size() >= 18);
    CHECK(recs.size() <= 20);
    for (const auto& r : recs) {
      CHECK(r.label == Label::Legit);
      CHECK(validate(r).empty());
      if (r.direction == Direction::Out) {
        CHECK(r.tcp_flags == TcpFlags{}.with(TcpFlags::kPsh).with(TcpFlags::kAck));
        CHECK(r.dst_port == 1883);
        REQUIRE(r.len.has_value());
        CHECK(*r.len >= 20);
        CHECK(*r.len <= 40);
      } else {
        CHECK(r.tcp_flags.has(TcpFlags::kAck));
      }
    }
    CHECK(gen_benign(quiet(10'000)) == recs);
  }

  TEST_CASE("keepalive pairs") {
    const auto recs = gen_benign(quiet(60'000));
    const auto pings = std::count_if(recs.begin(), recs.end(),
                                     [](const auto& r) { return r.len == 2u; });
    // PINGREQ and PINGRESP every 15 s.
    CHECK(pings >= 6);
    CHECK(pings <= 8);
  }

  TEST_CASE("zero durations") {
    TrafficScenario sc = quiet(1);
    sc.scale = 1e-9;
    CHECK(sc.effective_duration_ms() == 0);
    CHECK(gen_benign(sc).empty());
    CHECK(gen_ambient(sc).empty());
    CHECK(gen_attack({AttackKind::SynFlood, 100, 0, 1000}, 1).empty());
  }

  TEST_CASE("schedule") {
    TrafficScenario sc = quiet(1'000'000);
    CHECK(schedule_attacks(sc).empty());
    sc.seed = 42;
    sc.attacks = {{AttackKind::UdpFlood, 100, 5000, 3}};
    const auto eps = schedule_attacks(sc);
    REQUIRE(eps.size() == 3);
    for (std::size_t i = 0; i < eps.size(); ++i) {
      CHECK(eps[i].start_ms + eps[i].duration_ms <= sc.duration_ms);
      if (i) CHECK(eps[i - 1].start_ms <= eps[i].start_ms);
    }
    CHECK(schedule_attacks(sc) == eps);
  }

  TEST_CASE("attack shapes") {
    const auto syn = gen_attack({AttackKind::SynFlood, 0, 1000, 1000}, 3);
    CHECK(syn.size() == 1000);
    for (const auto& r : syn) {
      CHECK(r.label == Label::Anomalous);
      CHECK(r.tcp_flags == TcpFlags{}.with(TcpFlags::kSyn));
      CHECK(*r.win <= 1024);
      CHECK_FALSE(r.len.has_value());
      CHECK(validate(r).empty());
    }
    for (const auto& r : gen_attack({AttackKind::PingOfDeath, 0, 1000, 10}, 3)) {
      CHECK(r.proto == Protocol::icmp());
      CHECK(*r.len >= 65000);
      CHECK(encode(r)[kLenNorm] == 1.0f);
    }
    for (const auto& r : gen_attack({AttackKind::UdpFlood, 0, 1000, 100}, 3)) {
      CHECK(r.proto == Protocol::udp());
      CHECK(*r.len <= 1472);
      CHECK(*r.dst_port >= 1024);
    }
    for (const auto& r : gen_attack({AttackKind::TcpFlood, 0, 1000, 100}, 3))
      CHECK(r.tcp_flags == TcpFlags{}.with(TcpFlags::kAck));
    const auto mitm = gen_attack({AttackKind::Mitm, 0, 4000, 5}, 3);
    REQUIRE(mitm.size() >= 2);
    CHECK(mitm[0].seq_start == mitm[1].seq_start);
    CHECK(mitm[0].ack == mitm[1].ack);
    CHECK(mitm[0].src_addr != mitm[1].src_addr);
  }

  TEST_CASE("ambient chatter is legit, inbound first and low rate") {
    TrafficScenario sc = quiet(600'000);
    sc.benign.ambient_pps = 0.5;
    const auto recs = gen_ambient(sc);
    CHECK(recs.size() > 200);
    CHECK(recs.size() < 500);
    for (const auto& r : recs) {
      CHECK(r.label == Label::Legit);
      CHECK(validate(r).empty());
      CHECK(r.proto.kind != Protocol::Kind::Tcp);
    }
  }

  TEST_CASE("acceptance scenario composition") {
    TrafficScenario sc;
    sc.seed = 7;
    sc.scale = 0.02;
    const auto res = synthesize(sc);
    CHECK(res.anomalous_fraction >= 0.02);
    CHECK(res.anomalous_fraction <= 0.15);
    CHECK(res.episodes.size() == 5);
    for (std::size_t i = 1; i < res.records.size(); ++i)
      REQUIRE(*res.records[i - 1].tick_ms <= *res.records[i].tick_ms);
    const auto bad = std::count_if(res.records.begin(), res.records.end(),
                                   [](const auto& r) { return r.label == Label::Anomalous; });
    CHECK(res.anomalous_fraction ==
          doctest::Approx(static_cast<double>(bad) / static_cast<double>(res.records.size())));
    const auto again = synthesize(sc);
    CHECK(again.records == res.records);
    CHECK(sha256_hex(csv_of(again.records)) == sha256_hex(csv_of(res.records)));
  }

  TEST_CASE("labels follow the generating stream") {
    TrafficScenario sc;
    sc.scale = 0.01;
    sc.attacks = {};
    for (const auto& r : synthesize(sc).records) CHECK(r.label == Label::Legit);
    for (auto kind : {AttackKind::UdpFlood, AttackKind::TcpFlood, AttackKind::SynFlood,
                      AttackKind::PingOfDeath, AttackKind::Mitm})
      for (const auto& r : gen_attack({kind, 0, 3000, 20}, 9)) CHECK(r.label == Label::Anomalous);
  }

  TEST_CASE("SYN flood at default rate trips the filter") {
    const auto spec = default_attack_mix().front();
    REQUIRE(spec.kind == AttackKind::SynFlood);
    CHECK(spec.rate_pps * static_cast<double>(FilterConfig{}.rate_window_ms) / 1000.0 >
          static_cast<double>(FilterConfig{}.rate_threshold));
  }

  TEST_CASE("scenario validation and names") {
    TrafficScenario sc;
    CHECK_NOTHROW(sc.validate());
    sc.scale = 0;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = {};
    sc.benign.telemetry_period_ms = 0;
    sc.benign.keepalive_period_ms = 0;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = {};
    sc.attacks[0].rate_pps = 0;
    CHECK_THROWS_AS(sc.validate(), Error);
    CHECK(attack_kind_from_string("Mitm") == AttackKind::Mitm);
    CHECK_THROWS_AS(attack_kind_from_string("Sniffing"), Error);
  }
}
