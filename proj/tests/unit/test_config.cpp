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

#include <fstream>

#include "doctest.h"
#include "support.hpp"
#include "tinyids/config.hpp"
#include "tinyids/error.hpp"

using namespace tinyids;
using namespace tinyids::testing;
using nlohmann::json;

namespace {

Errc config_error(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("config accepted: " << doc.dump());
  return Errc::InvalidArgument;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty document gives defaults") {
    const auto cfg = config_from_json(json::object());
    CHECK(cfg.seed == 7);
    CHECK(cfg.scenario.scale == 1.0);
    CHECK(cfg.train.epochs == 200);
    CHECK(cfg.mlp.layer_sizes == std::vector<std::size_t>{9, 8, 7, 5, 3, 2});
    CHECK(cfg.filter.rate_threshold == 200);
  }

  TEST_CASE("top-level seed reaches every seeded section") {
    const auto cfg = config_from_json({{"seed", 99}});
    CHECK(cfg.scenario.seed == 99);
    CHECK(cfg.train.seed == 99);
    auto c2 = cfg;
    c2.apply_seed(5);
    CHECK(c2.seed == 5);
    CHECK(c2.scenario.seed == 5);
    CHECK(c2.train.seed == 5);
  }

  TEST_CASE("sections are read") {
    const json doc = {
        {"scenario",
         {{"scale", 0.5},
          {"benign", {{"ambient_pps", 0.0}}},
          {"attacks", {{{"kind", "UdpFlood"}, {"rate_pps", 10}, {"duration_ms", 50}, {"count", 2}}}}}},
        {"filter", {{"malformed_codes", {109, 17}}, {"syn_only", true}}},
        {"tree", {{"max_depth", 3}}},
        {"train", {{"epochs", 4}}},
        {"battery", {{"reserve_pct", 10}}},
    };
    const auto cfg = config_from_json(doc);
    CHECK(cfg.scenario.scale == 0.5);
    CHECK(cfg.scenario.benign.ambient_pps == 0.0);
    REQUIRE(cfg.scenario.attacks.size() == 1);
    CHECK(cfg.scenario.attacks[0].kind == AttackKind::UdpFlood);
    CHECK(cfg.scenario.attacks[0].count == 2);
    CHECK(cfg.filter.malformed_codes == std::set<std::uint8_t>{0x6d, 0x11});
    CHECK(cfg.filter.syn_only);
    CHECK(cfg.tree.max_depth == 3);
    CHECK(cfg.train.epochs == 4);
    CHECK(cfg.battery.reserve_pct == 10);
  }

  TEST_CASE("round trip through json") {
    auto cfg = config_from_json({{"seed", 3}, {"train", {{"epochs", 9}}}});
    const auto back = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(back) == config_to_json(cfg));
  }

  TEST_CASE("invalid documents are config errors") {
    CHECK(config_error({{"bogus", 1}}) == Errc::Config);
    CHECK(config_error({{"tree", {{"depth", 1}}}}) == Errc::Config);
    CHECK(config_error({{"train", {{"epochs", "many"}}}}) == Errc::Config);
    CHECK(config_error({{"scenario", {{"scale", 2.0}}}}) == Errc::Config);
    CHECK(config_error({{"scenario", {{"attacks", {{{"kind", "Sniffing"}}}}}}}) == Errc::Config);
    CHECK(config_error({{"filter", {{"rate_threshold", 0}}}}) == Errc::Config);
    CHECK(config_error({{"mlp", {{"layer_sizes", {9, 4, 3}}}}}) == Errc::Config);
    CHECK(config_error({{"battery", {{"reserve_pct", 100}}}}) == Errc::Config);
    CHECK(config_error(json::array()) == Errc::Config);
  }

  TEST_CASE("files and relative driver paths") {
    TempDir dir;
    {
      std::ofstream(dir / "c.json") << R"({"seed": 11, "verify": {"driver_source": "drv/d.c"}})";
    }
    const auto cfg = load_config(dir / "c.json");
    CHECK(cfg.seed == 11);
    CHECK(cfg.verify.driver_source == (dir.path() / "drv/d.c").lexically_normal().string());
    { std::ofstream(dir / "bad.json") << "{ nope"; }
    CHECK_THROWS_AS(load_config(dir / "bad.json"), Error);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), Error);
  }
}
