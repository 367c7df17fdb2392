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
#include <deque>
#include <set>

#include "tinyids/capture.hpp"

namespace tinyids {

struct FilterConfig {
  std::set<std::uint8_t> malformed_codes{0x6d};
  std::uint64_t rate_window_ms = 1000;
  std::uint64_t rate_threshold = 200;  // packets per window, flag when exceeded
  bool syn_only = false;               // count only SYN segments

  // Throws Error{Config} when a threshold is zero.
  void validate() const;
};

enum class FilterVerdict : std::uint8_t { Pass, FlagMalformed, FlagRate };

const char* to_string(FilterVerdict verdict);

// Sliding window of recent arrival ticks for one monitored stream.
// Holds at most rate_threshold + 1 ticks; that is enough to decide whether
// the window count exceeds the threshold.
class RateState {
 public:
  const std::deque<std::uint64_t>& ticks() const { return ticks_; }
  std::optional<std::uint64_t> newest() const {
    if (ticks_.empty()) return std::nullopt;
    return ticks_.back();
  }

 private:
  friend FilterVerdict update_rate(RateState&, std::uint64_t,
                                   const FilterConfig&);
  std::deque<std::uint64_t> ticks_;
  std::optional<std::uint64_t> last_tick_;
};

bool check_malformed(const CaptureRecord& record, const FilterConfig& cfg);

// Inserts the tick and reports FlagRate when more than rate_threshold ticks
// fall in (tick - rate_window_ms, tick]. Throws Error{NonMonotonicTick} if
// tick precedes the previous one; state is left untouched in that case.
FilterVerdict update_rate(RateState& state, std::uint64_t tick_ms,
                          const FilterConfig& cfg);

// Malformed check first, then the rate check. The rate state is updated even
// when the record is malformed; FlagMalformed wins over FlagRate. Records
// without a tick, or non-SYN records under syn_only, skip the rate check.
FilterVerdict filter_chain(const CaptureRecord& record, RateState& state,
                           const FilterConfig& cfg);

}  // namespace tinyids
