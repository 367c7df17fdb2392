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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "tinyids/tinyids.h"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path path;
  Scratch() {
    path = fs::temp_directory_path() / ("tids_capi_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run(const std::string& args) {
  const std::string cmd = std::string(TIDS_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

tids_config* small_config(const fs::path& out) {
  { std::ofstream(out / "small.json") << R"({"scenario": {"scale": 0.01}, "train": {"epochs": 20}})"; }
  tids_config* cfg = nullptr;
  REQUIRE(tids_config_load((out / "small.json").c_str(), &cfg) == TIDS_OK);
  REQUIRE(tids_config_set_output_dir(cfg, out.c_str()) == TIDS_OK);
  return cfg;
}

}  // namespace

TEST_CASE("status names and exit codes") {
  CHECK(std::string(tids_status_name(TIDS_OK)) == "ok");
  CHECK(tids_exit_code(TIDS_OK) == 0);
  CHECK(tids_exit_code(TIDS_E_CONFIG) == 2);
  CHECK(tids_exit_code(TIDS_E_DATA) == 3);
  CHECK(tids_exit_code(TIDS_E_TRAINING) == 4);
  CHECK(tids_exit_code(TIDS_E_VERIFY) == 5);
  CHECK(tids_exit_code(TIDS_E_IO) == 3);
  CHECK(tids_exit_code(TIDS_E_INVALID_ARGUMENT) == 3);
  CHECK(tids_exit_code(TIDS_E_INTERNAL) == 1);
  CHECK(std::string(tids_version()).size() > 0);
}

TEST_CASE("null arguments are rejected with a message") {
  CHECK(tids_config_default(nullptr) == TIDS_E_INVALID_ARGUMENT);
  CHECK(std::string(tids_last_error()).size() > 0);
  tids_config_free(nullptr);
  tids_records_free(nullptr);
  tids_tree_free(nullptr);
  tids_mlp_free(nullptr);
  tids_string_free(nullptr);
  tids_config* cfg = nullptr;
  CHECK(tids_config_load("/nonexistent/tids.json", &cfg) != TIDS_OK);
  CHECK(cfg == nullptr);
}

TEST_CASE("records, models and save/load through handles") {
  Scratch dir;
  tids_config* cfg = small_config(dir.path);
  tids_records* recs = nullptr;
  double frac = 0;
  REQUIRE(tids_records_synthesize(cfg, &recs, &frac) == TIDS_OK);
  CHECK(tids_records_count(recs) > 1000);
  CHECK(frac > 0.0);
  CHECK(frac < 0.5);

  char* line = nullptr;
  REQUIRE(tids_records_line(recs, 0, &line) == TIDS_OK);
  CHECK(std::string(line).size() > 10);
  tids_string_free(line);
  CHECK(tids_records_line(recs, tids_records_count(recs), &line) == TIDS_E_INVALID_ARGUMENT);

  const auto csv = (dir.path / "d.csv").string();
  REQUIRE(tids_records_write_csv(recs, csv.c_str(), 1) == TIDS_OK);
  tids_records* back = nullptr;
  REQUIRE(tids_records_read_csv(csv.c_str(), &back) == TIDS_OK);
  CHECK(tids_records_count(back) == tids_records_count(recs));

  tids_records *train = nullptr, *hold = nullptr;
  REQUIRE(tids_records_split(recs, cfg, &train, &hold) == TIDS_OK);
  CHECK(tids_records_count(train) + tids_records_count(hold) == tids_records_count(recs));

  tids_tree* tree = nullptr;
  REQUIRE(tids_tree_fit(train, cfg, &tree) == TIDS_OK);
  tids_metrics m{};
  REQUIRE(tids_tree_evaluate(tree, hold, &m) == TIDS_OK);
  CHECK(m.tp + m.fp + m.tn + m.fn == tids_records_count(hold));
  const auto tj = (dir.path / "t.json").string();
  REQUIRE(tids_tree_save(tree, tj.c_str()) == TIDS_OK);
  tids_tree* tree2 = nullptr;
  REQUIRE(tids_tree_load(tj.c_str(), &tree2) == TIDS_OK);
  CHECK(tids_tree_node_count(tree2) == tids_tree_node_count(tree));

  tids_mlp* mlp = nullptr;
  REQUIRE(tids_mlp_train(train, hold, cfg, &mlp, nullptr) == TIDS_OK);
  CHECK(tids_mlp_parameter_count(mlp) == 209);
  const auto mb = (dir.path / "m.bin").string();
  size_t bytes = 0;
  REQUIRE(tids_mlp_save(mlp, mb.c_str(), &bytes) == TIDS_OK);
  CHECK(bytes == 854);
  tids_mlp* mlp2 = nullptr;
  REQUIRE(tids_mlp_load(mb.c_str(), &mlp2) == TIDS_OK);
  float fv[TIDS_FEATURE_COUNT];
  int label = 0;
  REQUIRE(tids_records_features(hold, 0, fv, &label) == TIDS_OK);
  int c1 = 0, c2 = 0;
  float s1 = 0, s2 = 0;
  REQUIRE(tids_mlp_predict(mlp, fv, &c1, &s1) == TIDS_OK);
  REQUIRE(tids_mlp_predict(mlp2, fv, &c2, &s2) == TIDS_OK);
  CHECK(c1 == c2);
  CHECK(s1 == s2);

  tids_verify_result vr{};
  const auto src = (dir.path / "m.c").string();
  REQUIRE(tids_mlp_emit_source(mlp, src.c_str(), nullptr) == TIDS_OK);
  REQUIRE(tids_config_set_driver(cfg, nullptr) == TIDS_OK);
  REQUIRE(tids_verify_mlp(mlp, src.c_str(), cfg, (dir.path / "w").c_str(), &vr, nullptr) ==
          TIDS_OK);
  CHECK(vr.skipped == 1);

  tids_mlp_free(mlp2);
  tids_mlp_free(mlp);
  tids_tree_free(tree2);
  tids_tree_free(tree);
  tids_records_free(train);
  tids_records_free(hold);
  tids_records_free(back);
  tids_records_free(recs);
  tids_config_free(cfg);
}

TEST_CASE("cli exit codes") {
  Scratch dir;
  CHECK(run("--help") == 0);
  CHECK(run("no-such-command") == 2);
  CHECK(run("synth --config /nonexistent.json -o " + (dir.path / "x.csv").string()) != 0);
  {
    std::ofstream(dir.path / "bad.json") << R"({"tree": {"max_depth": "deep"}})";
  }
  CHECK(run("synth --config " + (dir.path / "bad.json").string() + " -o " +
            (dir.path / "x.csv").string()) == 2);
  {
    std::ofstream(dir.path / "garbage.csv") << "not,a,dataset\n1,2\n";
  }
  CHECK(run("eval -m " + (dir.path / "nope.json").string() + " -d " +
            (dir.path / "garbage.csv").string()) != 0);
  {
    std::ofstream(dir.path / "one.json")
        << R"({"scenario": {"scale": 0.01, "attacks": []}})";
  }
  CHECK(run("pipeline --config " + (dir.path / "one.json").string() + " --output-dir " +
            (dir.path / "out1").string()) == 4);
  {
    std::ofstream(dir.path / "ok.json") << R"({"scenario": {"scale": 0.01}, "train": {"epochs": 5}})";
  }
  CHECK(run("pipeline --config " + (dir.path / "ok.json").string() + " --output-dir " +
            (dir.path / "out2").string()) == 0);
  CHECK(fs::exists(dir.path / "out2" / "report.json"));
  CHECK(run("synth --seed 3 --config " + (dir.path / "ok.json").string() + " -o " +
            (dir.path / "s.csv").string()) == 0);
  CHECK(fs::exists(dir.path / "s.csv"));
}
