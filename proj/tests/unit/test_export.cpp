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

#include <cstring>

#include "doctest.h"
#include "harness.hpp"
#include "support.hpp"
#include "tinyids/error.hpp"
#include "tinyids/export.hpp"
#include "tinyids/synth.hpp"
#include "tinyids/verify.hpp"

using namespace tinyids;
using namespace tinyids::testing;

namespace {

// Trained-looking model: Xavier init plus seeded f32 biases.
MlpModel random_model(std::uint64_t seed, const MlpArchitecture& arch = {}) {
  auto m = init_mlp(arch, seed);
  SplitMix64 rng(seed * 31 + 1);
  for (auto& layer : m.layers)
    for (auto& b : layer.biases) b = static_cast<float>(rng.uniform(-1, 1));
  return m;
}

Errc load_error(const std::vector<std::uint8_t>& bytes) {
  try {
    load_mlp(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("load_mlp accepted a broken stream");
  return Errc::InvalidArgument;
}

TreeModel xor_tree() {
  LabeledDataset d;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      FeatureVector v{};
      v[0] = static_cast<float>(a);
      v[1] = static_cast<float>(b);
      d.features.push_back(v);
      d.labels.push_back(static_cast<std::uint8_t>(a ^ b));
    }
  TreeParams p;
  p.max_depth = 2;
  p.min_samples_split = 2;
  p.min_impurity_decrease = 0;
  return fit_tree(d, p);
}

struct Harness {
  TempDir dir;
  std::filesystem::path exe;
  std::string log;

  explicit Harness(const std::string& source) {
    const auto src = dir / "tids_model.c";
    write_bytes(src, source);
    exe = dir / "harness";
    log = build_harness(src, fixture_driver(), exe);
  }
  std::string run(const std::vector<FeatureVector>& in) const {
    return run_harness(exe, format_driver_input(in), dir.path());
  }
};

}  // namespace

TEST_SUITE("export") {
  TEST_CASE("default binary is 854 bytes") {
    CHECK(mlp_binary_size(MlpArchitecture{}) == 6 + 2 * 6 + 4 * 209);
    CHECK(mlp_binary_size(MlpArchitecture{}) == 854);
    const auto bytes = save_mlp(zero_mlp(MlpArchitecture{}));
    CHECK(bytes.size() == 854);
    CHECK(std::memcmp(bytes.data(), "TIDS", 4) == 0);
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 6);
    CHECK(bytes[6] == 9);
    CHECK(bytes[7] == 0);
    CHECK(bytes[16] == 2);
    CHECK(size_report("mlp_binary", bytes.size()).within_budget);
  }

  TEST_CASE("binary layout is little-endian f32") {
    MlpModel m = zero_mlp(MlpArchitecture{{9, 1, 2}});
    m.layers[0].w(0, 0) = 1.0;   // 0x3f800000
    m.layers[1].biases[1] = -2.0;  // 0xc0000000
    const auto b = save_mlp(m);
    REQUIRE(b.size() == 6 + 6 + 4 * (9 + 1 + 2 + 2));
    CHECK(b[12] == 0x00);
    CHECK(b[13] == 0x00);
    CHECK(b[14] == 0x80);
    CHECK(b[15] == 0x3f);
    CHECK(b[b.size() - 1] == 0xc0);
  }

  TEST_CASE("save/load round trip is bitwise") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const MlpArchitecture arch =
          seed % 5 ? MlpArchitecture{} : MlpArchitecture{{9, 1 + seed % 7, 4, 2}};
      const auto m = random_model(seed, arch);
      const auto bytes = save_mlp(m);
      CHECK(bytes.size() == mlp_binary_size(arch));
      const auto back = load_mlp(bytes);
      CHECK(back == m);
      CHECK(save_mlp(back) == bytes);
    }
  }

  TEST_CASE("broken streams are rejected") {
    const auto good = save_mlp(random_model(5));
    for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{5}, std::size_t{10},
                            good.size() - 1}) {
      auto t = good;
      t.resize(cut);
      CHECK(load_error(t) == Errc::LengthMismatch);
    }
    auto extra = good;
    extra.push_back(0);
    CHECK(load_error(extra) == Errc::LengthMismatch);
    auto magic = good;
    magic[0] = 'X';
    CHECK(load_error(magic) == Errc::BadMagic);
    auto version = good;
    version[4] = 2;
    CHECK(load_error(version) == Errc::VersionMismatch);
  }

  TEST_CASE("file helpers") {
    TempDir dir;
    const auto bytes = save_mlp(random_model(6));
    write_bytes(dir / "m.bin", std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                                bytes.size()));
    CHECK(read_bytes(dir / "m.bin") == bytes);
    CHECK_THROWS_AS(read_bytes(dir / "missing.bin"), Error);
  }

  TEST_CASE("float literals") {
    CHECK(c_float_literal(0.0f) == "0.0f");
    CHECK(c_float_literal(1.0f) == "1.0f");
    CHECK(c_float_literal(-2.5f) == "-2.5f");
    CHECK(c_float_literal(0.1f) == "0.100000001f");
    CHECK(c_float_literal(1e-10f) == "1.00000001e-10f");
    SplitMix64 rng(9);
    for (int i = 0; i < 1000; ++i) {
      const float v = static_cast<float>(rng.uniform(-100, 100));
      const auto s = c_float_literal(v);
      CHECK(std::strtof(s.c_str(), nullptr) == v);
    }
  }

  TEST_CASE("emitted sources are deterministic and self-contained") {
    const auto m = random_model(7);
    const auto src = emit_mlp_source(m);
    CHECK(emit_mlp_source(m) == src);
    CHECK(src.find("int tids_predict(const float fv[9], float* score)") != std::string::npos);
    CHECK(src.find("#include <math.h>") != std::string::npos);
    CHECK(src.find("static const float") != std::string::npos);
    const auto t = xor_tree();
    CHECK(emit_tree_source(t) == emit_tree_source(t));
    CHECK(emit_tree_source(t).find("int tids_predict(const float fv[9], float* score)") !=
          std::string::npos);
  }

  TEST_CASE("single leaf tree source") {
    TreeModel leaf{{TreeNode{}}};
    leaf.nodes[0].class_counts = {4, 0};
    const auto src = emit_tree_source(leaf);
    CHECK(src.find("return 0;") != std::string::npos);
    CHECK(src.find("if (fv[") == std::string::npos);
  }

  TEST_CASE("XOR tree source has three conditionals") {
    const auto src = emit_tree_source(xor_tree());
    std::size_t ifs = 0;
    for (auto p = src.find("if (fv["); p != std::string::npos; p = src.find("if (fv[", p + 1))
      ++ifs;
    CHECK(ifs == 3);
  }

  TEST_CASE("tree source size estimate within 20 percent") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      TrafficScenario sc;
      sc.seed = seed;
      sc.scale = 0.02;
      const auto data = encode_dataset(synthesize(sc).records);
      const auto tree = fit_tree(data, TreeParams{});
      const double actual = static_cast<double>(emit_tree_source(tree).size());
      const double estimate = static_cast<double>(tree_size(tree).estimated_source_bytes);
      CHECK_MESSAGE(std::abs(estimate - actual) <= 0.2 * actual,
                    "seed " << seed << " nodes " << tree.nodes.size() << " actual " << actual);
    }
  }

  TEST_CASE("size report") {
    CHECK(size_report("x", 0).within_budget);
    CHECK(size_report("x", 26624).within_budget);
    CHECK_FALSE(size_report("x", 26625).within_budget);
    CHECK(size_report("x", 1).budget_bytes == 26624);
  }

  TEST_CASE("compiled zero model answers 0 0.500000") {
    if (!compiler_available()) {
      MESSAGE("no C compiler; skipping");
      return;
    }
    Harness h(emit_mlp_source(zero_mlp(MlpArchitecture{})));
    CHECK(h.log.empty());
    const auto out = h.run(verification_vectors(5, 1));
    std::string want;
    for (int i = 0; i < 5; ++i) want += "0 0.500000\n";
    CHECK(out == want);
  }

  TEST_CASE("compiled XOR tree reproduces the truth table") {
    if (!compiler_available()) {
      MESSAGE("no C compiler; skipping");
      return;
    }
    const auto t = xor_tree();
    Harness h(emit_tree_source(t));
    CHECK(h.log.empty());
    std::vector<FeatureVector> in;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        FeatureVector v{};
        v[0] = static_cast<float>(a);
        v[1] = static_cast<float>(b);
        in.push_back(v);
      }
    CHECK(h.run(in) == "0 1.000000\n1 1.000000\n1 1.000000\n0 1.000000\n");
  }

  TEST_CASE("compiled models agree with the reference on seeded vectors") {
    if (!compiler_available()) {
      MESSAGE("no C compiler; skipping");
      return;
    }
    TrafficScenario sc;
    sc.scale = 0.02;
    const auto data = encode_dataset(synthesize(sc).records);
    const auto tree = fit_tree(data, TreeParams{});
    TrainConfig cfg;
    cfg.epochs = 20;
    const auto mlp = train_mlp(data, MlpArchitecture{}, cfg).first;
    const auto vectors = verification_vectors(1000, 7);
    // Training rows exercise the populated branches of the tree.
    auto tree_in = vectors;
    tree_in.insert(tree_in.end(), data.features.begin(), data.features.end());

    Harness ht(emit_tree_source(tree));
    CHECK(ht.log.empty());
    std::vector<Prediction> tref;
    for (const auto& v : tree_in) tref.push_back({predict(tree, v), leaf_score(tree, v)});
    const auto tr = compare_predictions(tref, ht.run(tree_in), ModelKind::Tree);
    CHECK(tr.passed);
    CHECK(tr.class_mismatches == 0);

    Harness hm(emit_mlp_source(mlp));
    CHECK(hm.log.empty());
    std::vector<Prediction> mref;
    for (const auto& v : vectors) {
      const auto p = predict(mlp, v);
      mref.push_back({p.cls, p.score});
    }
    const auto mr = compare_predictions(mref, hm.run(vectors), ModelKind::Mlp, 1e-5);
    CHECK(mr.passed);
    CHECK(mr.max_score_diff <= 1e-5);
  }
}
