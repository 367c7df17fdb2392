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
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace tinyids {

enum class PowerMode : std::uint8_t { Normal, Filter, ModelFilter };

const char* to_string(PowerMode mode);
PowerMode power_mode_from_string(const std::string& name);

// Measured board draw per operating mode, in watts.
struct PowerProfile {
  double normal_w = 0.355;
  double filter_w = 0.630;
  double model_filter_w = 0.930;

  double watts(PowerMode mode) const;
  void validate() const;
};

struct PowerSegment {
  PowerMode mode = PowerMode::Normal;
  double duration_h = 0;
};

using PowerTrace = std::vector<PowerSegment>;

double total_hours(const PowerTrace& trace);

double energy_wh(const PowerTrace& trace, const PowerProfile& profile);

// Throws Error{ZeroDuration} when the trace covers no time.
double average_current_a(const PowerTrace& trace, const PowerProfile& profile,
                         double bus_voltage_v);

// Defaults k = 1, q = 20 %, 5 V are a back-solved reconstruction: with the
// 0.930 W model+filter draw over 24 h they give 5.58 Ah.
struct BatteryParams {
  double current_a = 0;
  double peukert_k = 1.0;
  double hours = 24;
  double reserve_pct = 20;  // charge left unused, [0, 100)
  double bus_voltage_v = 5.0;

  void validate() const;
};

// Peukert-adjusted capacity: 100 * I^k * t / (100 - q).
double battery_capacity_ah(const BatteryParams& p);

// average_current_a over the trace, then battery_capacity_ah with
// t = trace duration. `params.current_a` and `params.hours` are ignored.
double size_for_trace(const PowerTrace& trace, const PowerProfile& profile,
                      BatteryParams params);

// "mode,duration_h" with a header line.
PowerTrace read_trace_csv(std::istream& in);
PowerTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace tinyids
