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

// tids: command-line front end over the tinyids C interface.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tinyids/tinyids.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Raised with the status of the failing call; main() maps it to an exit code.
struct Failure {
  tids_status status;
  std::string what;
};

void check(tids_status st, const std::string& what) {
  if (st != TIDS_OK) throw Failure{st, what + ": " + tids_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ConfigPtr = std::unique_ptr<tids_config, Deleter<tids_config, tids_config_free>>;
using RecordsPtr = std::unique_ptr<tids_records, Deleter<tids_records, tids_records_free>>;
using TreePtr = std::unique_ptr<tids_tree, Deleter<tids_tree, tids_tree_free>>;
using MlpPtr = std::unique_ptr<tids_mlp, Deleter<tids_mlp, tids_mlp_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  tids_string_free(s);
  return out;
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON configuration file");
  cmd->add_option("--seed", c.seed, "Override every seed in the configuration");
}

ConfigPtr load(const Common& c) {
  tids_config* raw = nullptr;
  if (c.config.empty())
    check(tids_config_default(&raw), "config");
  else
    check(tids_config_load(c.config.c_str(), &raw), "config");
  ConfigPtr cfg(raw);
  if (c.seed) check(tids_config_set_seed(cfg.get(), *c.seed), "config");
  return cfg;
}

RecordsPtr read_dataset(const std::string& path) {
  tids_records* raw = nullptr;
  check(tids_records_read_csv(path.c_str(), &raw), "read " + path);
  return RecordsPtr(raw);
}

json metrics_json(const tids_metrics& m) {
  return {{"tp", m.tp},
          {"fp", m.fp},
          {"tn", m.tn},
          {"fn", m.fn},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"accuracy", m.accuracy}};
}

json counts_json(const tids_records* recs) {
  size_t legit = 0, anomalous = 0, unlabeled = 0;
  check(tids_records_label_counts(recs, &legit, &anomalous, &unlabeled), "records");
  return {{"records", tids_records_count(recs)},
          {"legit", legit},
          {"anomalous", anomalous},
          {"unlabeled", unlabeled}};
}

// Model files are told apart by extension: .json is a tree, anything else a
// serialized MLP.
struct Model {
  TreePtr tree;
  MlpPtr mlp;

  int predict(const float fv[TIDS_FEATURE_COUNT], float* score) const {
    int cls = 0;
    if (tree)
      check(tids_tree_predict(tree.get(), fv, &cls, score), "predict");
    else
      check(tids_mlp_predict(mlp.get(), fv, &cls, score), "predict");
    return cls;
  }
};

Model load_model(const std::string& path) {
  Model m;
  if (fs::path(path).extension() == ".json") {
    tids_tree* t = nullptr;
    check(tids_tree_load(path.c_str(), &t), "load " + path);
    m.tree.reset(t);
  } else {
    tids_mlp* p = nullptr;
    check(tids_mlp_load(path.c_str(), &p), "load " + path);
    m.mlp.reset(p);
  }
  return m;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tinyids: lightweight intrusion detection for constrained IoT nodes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tids_version()));

  Common common;
  std::string out, input, data, model, trace, source, driver, work_dir, curve;
  bool anonymize = false;

  auto* synth = app.add_subcommand("synth", "Generate a labeled capture dataset");
  add_common(synth, common);
  synth->add_option("-o,--out", out, "Dataset CSV")->required();

  auto* extract = app.add_subcommand("extract", "Encode a capture into feature vectors");
  add_common(extract, common);
  extract->add_option("-i,--input", input, "Netdump log, or a dataset CSV (.csv)")->required();
  extract->add_option("-o,--out", out, "Encoded feature CSV")->required();
  extract->add_flag("--anonymize", anonymize, "Drop addresses and ports before encoding");

  auto* train_tree = app.add_subcommand("train-tree", "Fit a decision tree");
  add_common(train_tree, common);
  train_tree->add_option("-d,--data", data, "Dataset CSV")->required();
  train_tree->add_option("-o,--out", out, "Tree JSON")->required();

  auto* train_mlp = app.add_subcommand("train-mlp", "Train the multilayer perceptron");
  add_common(train_mlp, common);
  train_mlp->add_option("-d,--data", data, "Dataset CSV")->required();
  train_mlp->add_option("-o,--out", out, "Model binary")->required();
  train_mlp->add_option("--curve", curve, "Per-epoch accuracy CSV");

  auto* eval = app.add_subcommand("eval", "Score a model on a dataset");
  add_common(eval, common);
  eval->add_option("-m,--model", model, "Tree JSON or model binary")->required();
  eval->add_option("-d,--data", data, "Dataset CSV")->required();

  auto* exp = app.add_subcommand("export", "Emit a C99 inference source");
  add_common(exp, common);
  exp->add_option("-m,--model", model, "Tree JSON or model binary")->required();
  exp->add_option("-o,--out", out, "C source path")->required();

  auto* power = app.add_subcommand("power", "Energy and battery sizing for a duty trace");
  add_common(power, common);
  power->add_option("-t,--trace", trace, "CSV with mode,duration_h rows")->required();

  auto* verify = app.add_subcommand("verify", "Check an emitted C model against the reference");
  add_common(verify, common);
  verify->add_option("-m,--model", model, "Tree JSON or model binary")->required();
  verify->add_option("-s,--source", source, "Emitted C source (emitted fresh when omitted)");
  verify->add_option("--driver", driver, "Harness driver C source");
  verify->add_option("--work-dir", work_dir, "Scratch directory")->default_val("tids_verify");

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write report.json");
  add_common(pipeline, common);
  pipeline->add_option("--output-dir", out, "Artifact directory");
  pipeline->add_option("--driver", driver, "Harness driver C source");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto cfg = load(common);

    if (synth->parsed()) {
      tids_records* raw = nullptr;
      double frac = 0;
      check(tids_records_synthesize(cfg.get(), &raw, &frac), "synth");
      RecordsPtr recs(raw);
      check(tids_records_write_csv(recs.get(), out.c_str(), 1), "write " + out);
      json j = counts_json(recs.get());
      j["anomalous_fraction"] = frac;
      j["path"] = out;
      print(j);
    } else if (extract->parsed()) {
      tids_records* raw = nullptr;
      size_t issues = 0;
      if (fs::path(input).extension() == ".csv")
        check(tids_records_read_csv(input.c_str(), &raw), "read " + input);
      else
        check(tids_records_parse_log(input.c_str(), &raw, &issues), "parse " + input);
      RecordsPtr recs(raw);
      if (anonymize) check(tids_records_anonymize(recs.get()), "anonymize");
      check(tids_records_write_encoded(recs.get(), out.c_str()), "extract");
      json j = counts_json(recs.get());
      j["skipped_lines"] = issues;
      j["path"] = out;
      print(j);
    } else if (train_tree->parsed() || train_mlp->parsed()) {
      auto all = read_dataset(data);
      tids_records *tr = nullptr, *ho = nullptr;
      check(tids_records_split(all.get(), cfg.get(), &tr, &ho), "split");
      RecordsPtr train(tr), holdout(ho);
      tids_metrics m{};
      json j;
      if (train_tree->parsed()) {
        tids_tree* t = nullptr;
        check(tids_tree_fit(train.get(), cfg.get(), &t), "train-tree");
        TreePtr tree(t);
        check(tids_tree_save(tree.get(), out.c_str()), "write " + out);
        check(tids_tree_evaluate(tree.get(), holdout.get(), &m), "eval");
        j["nodes"] = tids_tree_node_count(tree.get());
        j["estimated_source_bytes"] = tids_tree_estimated_source_bytes(tree.get());
      } else {
        tids_mlp* p = nullptr;
        check(tids_mlp_train(train.get(), holdout.get(), cfg.get(), &p,
                             curve.empty() ? nullptr : curve.c_str()),
              "train-mlp");
        MlpPtr mlp(p);
        size_t bytes = 0;
        check(tids_mlp_save(mlp.get(), out.c_str(), &bytes), "write " + out);
        check(tids_mlp_evaluate(mlp.get(), holdout.get(), &m), "eval");
        j["parameters"] = tids_mlp_parameter_count(mlp.get());
        j["binary_bytes"] = bytes;
      }
      j["train_records"] = tids_records_count(train.get());
      j["holdout"] = metrics_json(m);
      j["path"] = out;
      print(j);
    } else if (eval->parsed()) {
      auto recs = read_dataset(data);
      const auto m = load_model(model);
      tids_metrics met{};
      if (m.tree)
        check(tids_tree_evaluate(m.tree.get(), recs.get(), &met), "eval");
      else
        check(tids_mlp_evaluate(m.mlp.get(), recs.get(), &met), "eval");
      print(metrics_json(met));
    } else if (exp->parsed()) {
      const auto m = load_model(model);
      size_t bytes = 0;
      if (m.tree)
        check(tids_tree_emit_source(m.tree.get(), out.c_str(), &bytes), "export");
      else
        check(tids_mlp_emit_source(m.mlp.get(), out.c_str(), &bytes), "export");
      json j{{"path", out}, {"source_bytes", bytes}, {"budget_bytes", TIDS_MODEL_BUDGET_BYTES}};
      if (m.mlp) {
        size_t bin = 0;
        const auto tmp = fs::temp_directory_path() / "tids_export_size.bin";
        check(tids_mlp_save(m.mlp.get(), tmp.c_str(), &bin), "export");
        fs::remove(tmp);
        j["binary_bytes"] = bin;
        j["within_budget"] = bin <= TIDS_MODEL_BUDGET_BYTES;
      } else {
        j["within_budget"] = bytes <= TIDS_MODEL_BUDGET_BYTES;
      }
      print(j);
    } else if (power->parsed()) {
      tids_power_summary s{};
      check(tids_power_from_trace_csv(trace.c_str(), cfg.get(), &s), "power");
      print({{"hours", s.hours},
             {"energy_wh", s.energy_wh},
             {"avg_current_a", s.avg_current_a},
             {"battery_ah", s.battery_ah}});
    } else if (verify->parsed()) {
      if (!driver.empty()) check(tids_config_set_driver(cfg.get(), driver.c_str()), "config");
      const auto m = load_model(model);
      fs::create_directories(work_dir);
      if (source.empty()) {
        source = (fs::path(work_dir) / "tids_model.c").string();
        if (m.tree)
          check(tids_tree_emit_source(m.tree.get(), source.c_str(), nullptr), "export");
        else
          check(tids_mlp_emit_source(m.mlp.get(), source.c_str(), nullptr), "export");
      }
      tids_verify_result r{};
      char* report = nullptr;
      if (m.tree)
        check(tids_verify_tree(m.tree.get(), source.c_str(), cfg.get(), work_dir.c_str(), &r,
                               &report),
              "verify");
      else
        check(tids_verify_mlp(m.mlp.get(), source.c_str(), cfg.get(), work_dir.c_str(), &r,
                              &report),
              "verify");
      std::cout << take(report) << "\n";
      if (r.skipped) {
        std::cerr << "tids: verify: skipped, no harness driver configured\n";
        return 0;
      }
      if (!r.passed) {
        std::cerr << "tids: verify: mismatch\n";
        return tids_exit_code(TIDS_E_VERIFY);
      }
    } else if (pipeline->parsed()) {
      if (!out.empty()) check(tids_config_set_output_dir(cfg.get(), out.c_str()), "config");
      if (!driver.empty()) check(tids_config_set_driver(cfg.get(), driver.c_str()), "config");
      char* report = nullptr;
      int verify_failed = 0;
      check(tids_pipeline_run(cfg.get(), &report, &verify_failed), "pipeline");
      std::cout << take(report) << "\n";
      if (verify_failed) {
        std::cerr << "tids: pipeline: verify stage reported a mismatch\n";
        return tids_exit_code(TIDS_E_VERIFY);
      }
    }
  } catch (const Failure& f) {
    std::cerr << "tids: " << f.what << "\n";
    return tids_exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "tids: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
