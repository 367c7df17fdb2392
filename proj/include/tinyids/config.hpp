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
#include <string>

#include "json.hpp"
#include "tinyids/filter.hpp"
#include "tinyids/mlp.hpp"
#include "tinyids/power.hpp"
#include "tinyids/synth.hpp"
#include "tinyids/tree.hpp"

namespace tinyids {

struct VerifyConfig {
  // C driver implementing the stdin/stdout harness protocol. Empty or missing
  // file means the verify stage is skipped.
  std::string driver_source;
  std::size_t vectors = 1000;
  double score_tolerance = 1e-5;
};

struct PipelineConfig {
  std::uint64_t seed = 7;
  std::string output_dir = "tids_out";
  TrafficScenario scenario;
  FilterConfig filter;
  TreeParams tree;
  MlpArchitecture mlp;
  TrainConfig train;
  PowerProfile power;
  BatteryParams battery;
  VerifyConfig verify;

  // Pushes `seed` into every seeded section.
  void apply_seed(std::uint64_t s);
  // Throws Error{Config} naming the first invalid section.
  void validate() const;
};

// Missing keys keep their defaults; unknown keys are an Error{Config}.
PipelineConfig config_from_json(const nlohmann::json& doc);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const PipelineConfig& cfg);

}  // namespace tinyids
