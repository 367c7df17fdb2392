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
#include <functional>
#include <string>
#include <vector>

#include "tinyids/features.hpp"

namespace tinyids {

enum class ModelKind : std::uint8_t { Tree, Mlp };

struct Prediction {
  std::uint8_t cls = 0;
  double score = 0;
};

// Deterministic probe vectors whose components are exact f32 values:
// components 0..6 in {0, 1}, components 7 and 8 uniform in [0, 1].
std::vector<FeatureVector> verification_vectors(std::size_t n, std::uint64_t seed);

// Harness stdin: nine values per line, single spaces, 9 significant digits.
std::string format_driver_input(const std::vector<FeatureVector>& vectors);

struct Divergence {
  std::size_t row = 0;  // zero-based
  Prediction expected;
  std::string got;      // raw harness line, empty if missing
};

struct VerifyReport {
  bool skipped = false;
  std::string note;
  bool passed = false;
  std::size_t rows = 0;
  std::size_t class_mismatches = 0;
  double max_score_diff = 0;
  std::vector<Divergence> divergent;  // first 10 at most
  std::string compiler_log;
};

inline constexpr std::size_t kMaxReportedDivergences = 10;

// Compares harness stdout ("<class> <score>" per line) against reference
// predictions. Classes must match on every row; for the MLP the score must
// also be within `tolerance`. A line count mismatch or an unparsable line fails.
VerifyReport compare_predictions(const std::vector<Prediction>& reference,
                                 const std::string& harness_stdout, ModelKind kind,
                                 double tolerance = 1e-5);

// Compiler command from $TIDS_CC, "cc" when unset.
std::string harness_compiler();

// Compiles `driver_source` together with `model_source` into `exe`. Throws
// Error{Compile} carrying the compiler output on failure; returns the
// compiler output (warnings) on success.
std::string build_harness(const std::filesystem::path& model_source,
                          const std::filesystem::path& driver_source,
                          const std::filesystem::path& exe);

// Feeds `input` on stdin and returns stdout. Throws Error{Verify} if the
// process cannot be run or exits nonzero.
std::string run_harness(const std::filesystem::path& exe, const std::string& input,
                        const std::filesystem::path& work_dir);

struct VerifyRequest {
  ModelKind kind = ModelKind::Mlp;
  std::filesystem::path model_source;
  std::filesystem::path driver_source;  // empty: stage skipped
  std::filesystem::path work_dir;
  std::size_t vectors = 1000;
  std::uint64_t seed = 7;
  double tolerance = 1e-5;
};

// Full build / run / compare round. Returns a skipped report when no driver
// is available; compile failures come back as a failed report with the log.
VerifyReport verify_model(const VerifyRequest& request,
                          const std::function<Prediction(const FeatureVector&)>& reference);

}  // namespace tinyids
