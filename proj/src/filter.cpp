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

#include "tinyids/filter.hpp"

#include "tinyids/error.hpp"

namespace tinyids {

void FilterConfig::validate() const {
  if (rate_window_ms == 0) throw Error(Errc::Config, "filter.rate_window_ms must be > 0");
  if (rate_threshold == 0) throw Error(Errc::Config, "filter.rate_threshold must be > 0");
}

const char* to_string(FilterVerdict verdict) {
  switch (verdict) {
    case FilterVerdict::Pass:
      return "Pass";
    case FilterVerdict::FlagMalformed:
      return "FlagMalformed";
    case FilterVerdict::FlagRate:
      return "FlagRate";
  }
  return "?";
}

bool check_malformed(const CaptureRecord& record, const FilterConfig& cfg) {
  return record.proto.kind == Protocol::Kind::Unknown &&
         cfg.malformed_codes.contains(record.proto.code);
}

FilterVerdict update_rate(RateState& state, std::uint64_t tick_ms,
                          const FilterConfig& cfg) {
  if (state.last_tick_ && tick_ms < *state.last_tick_)
    throw Error(Errc::NonMonotonicTick,
                "tick " + std::to_string(tick_ms) + " precedes " +
                    std::to_string(*state.last_tick_));
  state.last_tick_ = tick_ms;
  auto& ticks = state.ticks_;
  ticks.push_back(tick_ms);
  while (!ticks.empty() && tick_ms - ticks.front() >= cfg.rate_window_ms)
    ticks.pop_front();
  const bool over = ticks.size() > cfg.rate_threshold;
  while (ticks.size() > cfg.rate_threshold + 1) ticks.pop_front();
  return over ? FilterVerdict::FlagRate : FilterVerdict::Pass;
}

FilterVerdict filter_chain(const CaptureRecord& record, RateState& state,
                           const FilterConfig& cfg) {
  const bool malformed = check_malformed(record, cfg);
  FilterVerdict rate = FilterVerdict::Pass;
  const bool counted = !cfg.syn_only || record.tcp_flags.has(TcpFlags::kSyn);
  if (record.tick_ms && counted) rate = update_rate(state, *record.tick_ms, cfg);
  if (malformed) return FilterVerdict::FlagMalformed;
  return rate;
}

}  // namespace tinyids
