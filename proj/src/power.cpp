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

#include "tinyids/power.hpp"

#include <cmath>
#include <fstream>

#include "tinyids/error.hpp"

namespace tinyids {

const char* to_string(PowerMode mode) {
  switch (mode) {
    case PowerMode::Normal: return "Normal";
    case PowerMode::Filter: return "Filter";
    case PowerMode::ModelFilter: return "ModelFilter";
  }
  return "?";
}

PowerMode power_mode_from_string(const std::string& name) {
  for (const auto m : {PowerMode::Normal, PowerMode::Filter, PowerMode::ModelFilter})
    if (name == to_string(m)) return m;
  throw Error(Errc::MalformedRow, "unknown power mode '" + name + "'");
}

double PowerProfile::watts(PowerMode mode) const {
  switch (mode) {
    case PowerMode::Normal: return normal_w;
    case PowerMode::Filter: return filter_w;
    case PowerMode::ModelFilter: return model_filter_w;
  }
  return 0;
}

void PowerProfile::validate() const {
  if (!(normal_w > 0 && normal_w <= filter_w && filter_w <= model_filter_w))
    throw Error(Errc::Config, "power profile must satisfy 0 < normal <= filter <= model_filter");
}

double total_hours(const PowerTrace& trace) {
  double h = 0;
  for (const auto& s : trace) h += s.duration_h;
  return h;
}

double energy_wh(const PowerTrace& trace, const PowerProfile& profile) {
  double wh = 0;
  for (const auto& s : trace) {
    if (!(s.duration_h > 0))
      throw Error(Errc::InvalidArgument, "power segment durations must be positive");
    wh += profile.watts(s.mode) * s.duration_h;
  }
  return wh;
}

double average_current_a(const PowerTrace& trace, const PowerProfile& profile,
                         double bus_voltage_v) {
  const double hours = total_hours(trace);
  if (!(hours > 0)) throw Error(Errc::ZeroDuration, "power trace covers no time");
  if (!(bus_voltage_v > 0)) throw Error(Errc::InvalidArgument, "bus voltage must be > 0");
  return energy_wh(trace, profile) / (bus_voltage_v * hours);
}

void BatteryParams::validate() const {
  if (!(current_a > 0)) throw Error(Errc::InvalidArgument, "battery current must be > 0");
  if (!(hours > 0)) throw Error(Errc::InvalidArgument, "battery hours must be > 0");
  if (!(peukert_k >= 1)) throw Error(Errc::InvalidArgument, "Peukert constant must be >= 1");
  if (!(reserve_pct >= 0 && reserve_pct < 100))
    throw Error(Errc::InvalidArgument, "reserve percentage must be in [0, 100)");
}

double battery_capacity_ah(const BatteryParams& p) {
  p.validate();
  return 100.0 * std::pow(p.current_a, p.peukert_k) * p.hours / (100.0 - p.reserve_pct);
}

double size_for_trace(const PowerTrace& trace, const PowerProfile& profile,
                      BatteryParams params) {
  params.current_a = average_current_a(trace, profile, params.bus_voltage_v);
  params.hours = total_hours(trace);
  return battery_capacity_ah(params);
}

PowerTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::MalformedHeader, "empty power trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "mode,duration_h")
    throw Error(Errc::MalformedHeader, "power trace header must be 'mode,duration_h'");
  PowerTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": missing comma");
    PowerSegment seg;
    seg.mode = power_mode_from_string(line.substr(0, comma));
    try {
      std::size_t used = 0;
      const auto cell = line.substr(comma + 1);
      seg.duration_h = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": bad duration");
    }
    if (!(seg.duration_h > 0) || !std::isfinite(seg.duration_h))
      throw Error(Errc::MalformedRow,
                  "line " + std::to_string(line_no) + ": duration must be positive");
    trace.push_back(seg);
  }
  return trace;
}

PowerTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return read_trace_csv(in);
}

}  // namespace tinyids
