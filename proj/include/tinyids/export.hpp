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
#include <string_view>
#include <vector>

#include "tinyids/mlp.hpp"
#include "tinyids/tree.hpp"

namespace tinyids {

// Binary weight format (all integers and floats little-endian):
//   "TIDS" | version u8 = 1 | n_layers u8 | layer_sizes u16 x n_layers |
//   per dense layer: weights f32 row-major (out x in), then biases f32.
inline constexpr char kMlpMagic[4] = {'T', 'I', 'D', 'S'};
inline constexpr std::uint8_t kMlpFormatVersion = 1;

// Flash budget the exported models are checked against (26 KB).
inline constexpr std::size_t kModelBudgetBytes = 26624;

// Average emitted-source bytes per tree node, used by tree_size().
inline constexpr std::size_t kTreeSourceBytesPerNode = 75;

std::size_t mlp_binary_size(const MlpArchitecture& arch);

std::vector<std::uint8_t> save_mlp(const MlpModel& model);
// Throws Error{BadMagic}, Error{VersionMismatch} or Error{LengthMismatch}.
MlpModel load_mlp(const std::vector<std::uint8_t>& bytes);

void write_bytes(const std::filesystem::path& path, std::string_view bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

// Freestanding C99 translation units exporting
//   int tids_predict(const float fv[9], float* score);
// `score` may be NULL. Output is a pure function of the model.
std::string emit_mlp_source(const MlpModel& model);
std::string emit_tree_source(const TreeModel& tree);

// "%.9g" with a trailing 'f', always a valid C float literal.
std::string c_float_literal(float v);

struct SizeReport {
  std::string kind;
  std::size_t bytes = 0;
  std::size_t budget_bytes = kModelBudgetBytes;
  bool within_budget = true;
};

SizeReport size_report(std::string kind, std::size_t artifact_bytes);

}  // namespace tinyids
