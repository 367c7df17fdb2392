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

#include "tinyids/export.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "tinyids/error.hpp"

namespace tinyids {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_f32(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(bits >> s));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

double get_f32(const std::uint8_t* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  return static_cast<double>(std::bit_cast<float>(bits));
}

void emit_array(std::string& s, const std::string& name,
                const std::vector<double>& values) {
  s += "static const float " + name + "[" + std::to_string(values.size()) + "] = {";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i % 6 == 0) s += "\n  ";
    s += c_float_literal(static_cast<float>(values[i]));
    if (i + 1 < values.size()) s += ", ";
  }
  s += "\n};\n";
}

void emit_tree_node(std::string& s, const TreeModel& tree, std::size_t id,
                    std::size_t indent) {
  const std::string pad(indent * 2, ' ');
  const auto& n = tree.nodes[id];
  if (n.is_leaf()) {
    const double total = static_cast<double>(n.class_counts[0]) + n.class_counts[1];
    const float score =
        total == 0 ? 1.0f : static_cast<float>(n.class_counts[n.cls] / total);
    s += pad + "if (score) *score = " + c_float_literal(score) + ";\n";
    s += pad + "return " + std::to_string(n.cls) + ";\n";
    return;
  }
  s += pad + "if (fv[" + std::to_string(n.feature) + "] <= " +
       c_float_literal(n.threshold) + ") {\n";
  emit_tree_node(s, tree, static_cast<std::size_t>(n.left), indent + 1);
  s += pad + "} else {\n";
  emit_tree_node(s, tree, static_cast<std::size_t>(n.right), indent + 1);
  s += pad + "}\n";
}

}  // namespace

std::size_t mlp_binary_size(const MlpArchitecture& arch) {
  return 6 + 2 * arch.layer_sizes.size() + 4 * arch.parameter_count();
}

std::vector<std::uint8_t> save_mlp(const MlpModel& model) {
  const auto arch = model.architecture();
  std::vector<std::uint8_t> out(std::begin(kMlpMagic), std::end(kMlpMagic));
  out.reserve(mlp_binary_size(arch));
  out.push_back(kMlpFormatVersion);
  out.push_back(static_cast<std::uint8_t>(arch.layer_sizes.size()));
  for (const auto s : arch.layer_sizes) put_u16(out, static_cast<std::uint16_t>(s));
  for (const auto& layer : model.layers) {
    for (const auto w : layer.weights) put_f32(out, w);
    for (const auto b : layer.biases) put_f32(out, b);
  }
  return out;
}

MlpModel load_mlp(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) throw Error(Errc::LengthMismatch, "model stream shorter than its magic");
  if (!std::equal(std::begin(kMlpMagic), std::end(kMlpMagic), bytes.begin()))
    throw Error(Errc::BadMagic, "model stream does not start with TIDS");
  if (bytes.size() < 6) throw Error(Errc::LengthMismatch, "model header truncated");
  if (bytes[4] != kMlpFormatVersion)
    throw Error(Errc::VersionMismatch,
                "unsupported model format version " + std::to_string(bytes[4]));
  const std::size_t n_layers = bytes[5];
  if (n_layers < 2) throw Error(Errc::LengthMismatch, "model declares fewer than 2 layers");
  if (bytes.size() < 6 + 2 * n_layers)
    throw Error(Errc::LengthMismatch, "model layer table truncated");
  MlpArchitecture arch;
  arch.layer_sizes.clear();
  for (std::size_t l = 0; l < n_layers; ++l)
    arch.layer_sizes.push_back(get_u16(&bytes[6 + 2 * l]));
  if (std::find(arch.layer_sizes.begin(), arch.layer_sizes.end(), 0u) !=
      arch.layer_sizes.end())
    throw Error(Errc::LengthMismatch, "model declares an empty layer");
  const auto expected = mlp_binary_size(arch);
  if (bytes.size() != expected)
    throw Error(Errc::LengthMismatch, "model stream is " + std::to_string(bytes.size()) +
                                          " bytes, header implies " +
                                          std::to_string(expected));
  MlpModel m;
  const std::uint8_t* p = bytes.data() + 6 + 2 * n_layers;
  for (std::size_t l = 1; l < n_layers; ++l) {
    DenseLayer layer;
    layer.in = arch.layer_sizes[l - 1];
    layer.out = arch.layer_sizes[l];
    layer.weights.resize(layer.in * layer.out);
    layer.biases.resize(layer.out);
    for (auto& w : layer.weights) w = get_f32(p), p += 4;
    for (auto& b : layer.biases) b = get_f32(p), p += 4;
    m.layers.push_back(std::move(layer));
  }
  return m;
}

void write_bytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string c_float_literal(float v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(v));
  std::string s = buf;
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s + "f";
}

std::string emit_mlp_source(const MlpModel& model) {
  const auto arch = model.architecture();
  arch.validate();
  std::size_t widest = 0;
  for (const auto s : arch.layer_sizes) widest = std::max(widest, s);

  std::string s;
  s += "/* Generated by tinyids: multilayer perceptron ";
  for (std::size_t l = 0; l < arch.layer_sizes.size(); ++l)
    s += (l ? "-" : "") + std::to_string(arch.layer_sizes[l]);
  s += ", " + std::to_string(arch.parameter_count()) + " parameters. */\n";
  s += "#include <math.h>\n\n";
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    emit_array(s, "tids_w" + std::to_string(l), model.layers[l].weights);
    emit_array(s, "tids_b" + std::to_string(l), model.layers[l].biases);
  }
  s += R"(
static void tids_dense(const float* w, const float* b, int in, int out,
                       const float* x, float* y, int relu) {
  int o, i;
  for (o = 0; o < out; ++o) {
    float z = b[o];
    for (i = 0; i < in; ++i) z += w[o * in + i] * x[i];
    if (relu) {
      y[o] = z > 0.0f ? z : 0.0f;
    } else if (z >= 0.0f) {
      y[o] = 1.0f / (1.0f + expf(-z));
    } else {
      float e = expf(z);
      y[o] = e / (1.0f + e);
    }
  }
}

int tids_predict(const float fv[9], float* score) {
)";
  s += "  float a[" + std::to_string(widest) + "], b[" + std::to_string(widest) + "];\n";
  s += "  int cls;\n";
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    const char* in = l == 0 ? "fv" : (l % 2 == 1 ? "a" : "b");
    const char* out = l % 2 == 0 ? "a" : "b";
    s += "  tids_dense(tids_w" + std::to_string(l) + ", tids_b" + std::to_string(l) +
         ", " + std::to_string(layer.in) + ", " + std::to_string(layer.out) + ", " +
         in + ", " + out + ", " + (l + 1 < model.layers.size() ? "1" : "0") + ");\n";
  }
  const char* last = (model.layers.size() - 1) % 2 == 0 ? "a" : "b";
  s += std::string("  cls = ") + last + "[1] > " + last + "[0] ? 1 : 0;\n";
  s += std::string("  if (score) *score = ") + last + "[cls];\n";
  s += "  return cls;\n}\n";
  return s;
}

std::string emit_tree_source(const TreeModel& tree) {
  if (const auto why = tree.check(); !why.empty())
    throw Error(Errc::InvalidArgument, "cannot emit invalid tree: " + why);
  std::string s;
  s += "/* Generated by tinyids: decision tree, " + std::to_string(tree.nodes.size()) +
       " nodes. */\n\n";
  s += "int tids_predict(const float fv[9], float* score) {\n";
  if (tree.nodes[0].is_leaf()) s += "  (void)fv;\n";
  emit_tree_node(s, tree, 0, 1);
  s += "}\n";
  return s;
}

SizeReport size_report(std::string kind, std::size_t artifact_bytes) {
  SizeReport r;
  r.kind = std::move(kind);
  r.bytes = artifact_bytes;
  r.within_budget = r.bytes <= r.budget_bytes;
  return r;
}

}  // namespace tinyids
