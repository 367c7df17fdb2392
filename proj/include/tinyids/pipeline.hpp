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

#include <filesystem>
#include <string>

#include "json.hpp"
#include "tinyids/config.hpp"
#include "tinyids/error.hpp"
#include "tinyids/metrics.hpp"
#include "tinyids/mlp.hpp"
#include "tinyids/tree.hpp"
#include "tinyids/verify.hpp"

namespace tinyids {

// Error raised inside a pipeline stage; what() starts with "[stage] ".
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), "[" + stage + "] " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Rounds to six decimals so reports are stable golden files.
double round6(double v);

nlohmann::json metrics_json(const ConfusionMatrix& cm);

// Counters from replaying the record stream through the rule filter ahead of
// the classifiers. Flagged records are never handed to a model.
struct GatedRun {
  std::size_t flag_malformed = 0;
  std::size_t flag_rate = 0;
  std::size_t model_invocations = 0;
  ConfusionMatrix tree;
  ConfusionMatrix mlp;
};

GatedRun gated_replay(const std::vector<CaptureRecord>& stream, const FilterConfig& cfg,
                      const TreeModel& tree, const MlpModel& mlp);

// Power summary for a 24 h day in which the model runs for the share of
// packets that pass the filter, plus the always-on worst case.
nlohmann::json power_summary(double model_share, const PowerProfile& profile,
                             const BatteryParams& battery);

struct PipelineResult {
  nlohmann::json report;
  std::filesystem::path report_path;
  bool verify_failed = false;
};

// synth -> encode -> split -> fit tree / train MLP -> evaluate -> export ->
// gated replay -> power -> verify, writing every artifact and report.json
// under cfg.output_dir. Throws StageError.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace tinyids
