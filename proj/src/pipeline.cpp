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

#include "tinyids/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tinyids/capture.hpp"
#include "tinyids/error.hpp"
#include "tinyids/export.hpp"
#include "tinyids/features.hpp"
#include "tinyids/filter.hpp"
#include "tinyids/hash.hpp"
#include "tinyids/power.hpp"
#include "tinyids/synth.hpp"

namespace tinyids {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  } catch (const fs::filesystem_error& e) {
    throw StageError(name, Error(Errc::Io, e.what()));
  }
}

void write_text(const fs::path& path, const std::string& text) { write_bytes(path, text); }

json size_json(const SizeReport& r) {
  return {{"bytes", r.bytes}, {"budget_bytes", r.budget_bytes}, {"within_budget", r.within_budget}};
}

json verify_json(const VerifyReport& r) {
  json j{{"skipped", r.skipped}, {"note", r.note}};
  if (r.skipped) return j;
  j["passed"] = r.passed;
  j["rows"] = r.rows;
  j["class_mismatches"] = r.class_mismatches;
  j["max_score_diff"] = round6(r.max_score_diff);
  if (!r.passed) {
    json rows = json::array();
    for (const auto& d : r.divergent)
      rows.push_back({{"row", d.row},
                      {"expected_class", d.expected.cls},
                      {"expected_score", round6(d.expected.score)},
                      {"got", d.got}});
    j["divergent"] = rows;
    j["compiler_log"] = r.compiler_log;
  }
  return j;
}

}  // namespace

double round6(double v) { return std::round(v * 1e6) / 1e6; }

json metrics_json(const ConfusionMatrix& cm) {
  const auto m = prf1(cm);
  return {{"tp", cm.tp},
          {"fp", cm.fp},
          {"tn", cm.tn},
          {"fn", cm.fn},
          {"precision", round6(m.precision)},
          {"recall", round6(m.recall)},
          {"f1", round6(m.f1)},
          {"accuracy", round6(cm.accuracy())}};
}

GatedRun gated_replay(const std::vector<CaptureRecord>& stream, const FilterConfig& cfg,
                      const TreeModel& tree, const MlpModel& mlp) {
  GatedRun run;
  RateState state;
  for (const auto& r : stream) {
    const auto verdict = filter_chain(r, state, cfg);
    const std::uint8_t label = r.label == Label::Anomalous ? 1 : 0;
    std::uint8_t tree_pred = 1;
    std::uint8_t mlp_pred = 1;
    if (verdict == FilterVerdict::FlagMalformed) {
      ++run.flag_malformed;
    } else if (verdict == FilterVerdict::FlagRate) {
      ++run.flag_rate;
    } else {
      ++run.model_invocations;
      const auto fv = encode(r);
      tree_pred = predict(tree, fv);
      mlp_pred = predict(mlp, fv).cls;
    }
    const auto tally = [label](ConfusionMatrix& cm, std::uint8_t p) {
      if (p && label) ++cm.tp;
      else if (p) ++cm.fp;
      else if (label) ++cm.fn;
      else ++cm.tn;
    };
    tally(run.tree, tree_pred);
    tally(run.mlp, mlp_pred);
  }
  return run;
}

json power_summary(double model_share, const PowerProfile& profile,
                   const BatteryParams& battery) {
  constexpr double kDayHours = 24.0;
  PowerTrace observed;
  if (model_share > 0) observed.push_back({PowerMode::ModelFilter, kDayHours * model_share});
  if (model_share < 1) observed.push_back({PowerMode::Filter, kDayHours * (1 - model_share)});
  const PowerTrace worst{{PowerMode::ModelFilter, kDayHours}};

  const auto summarize = [&](const PowerTrace& t) {
    json segs = json::array();
    for (const auto& s : t)
      segs.push_back({{"mode", to_string(s.mode)}, {"duration_h", round6(s.duration_h)}});
    return json{{"trace", segs},
                {"energy_wh", round6(energy_wh(t, profile))},
                {"avg_current_a", round6(average_current_a(t, profile, battery.bus_voltage_v))},
                {"battery_ah", round6(size_for_trace(t, profile, battery))}};
  };
  return {{"model_share", round6(model_share)},
          {"observed_day", summarize(observed)},
          {"worst_case_day", summarize(worst)},
          {"assumptions",
           {{"peukert_k", battery.peukert_k},
            {"reserve_pct", battery.reserve_pct},
            {"bus_voltage_v", battery.bus_voltage_v},
            {"note",
             "k, reserve and bus voltage are reconstructed defaults chosen so that "
             "24 h at the model+filter draw needs about 5.6 Ah; they are not measurements"}}}};
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  stage("config", [&] { cfg.validate(); });
  const fs::path out = cfg.output_dir;
  stage("setup", [&] { fs::create_directories(out / "tree"), fs::create_directories(out / "mlp"); });

  json report;
  report["data_source"] = "synthetic scenario; metrics are not from a physical device capture";
  report["seed"] = cfg.seed;

  // synth
  const auto synth = stage("synth", [&] {
    auto s = synthesize(cfg.scenario);
    write_csv(s.records, out / "dataset.csv");
    write_ticks(s.records, ticks_path_for(out / "dataset.csv"));
    return s;
  });
  json episodes = json::array();
  for (const auto& e : synth.episodes)
    episodes.push_back({{"kind", to_string(e.kind)},
                        {"start_ms", e.start_ms},
                        {"duration_ms", e.duration_ms},
                        {"rate_pps", e.rate_pps}});

  // extract
  const auto data = stage("extract", [&] {
    std::vector<CaptureRecord> anon;
    anon.reserve(synth.records.size());
    for (const auto& r : synth.records) anon.push_back(anonymize(r));
    write_csv(anon, out / "anonymized.csv");
    auto d = encode_dataset(anon);
    write_encoded_csv(d, out / "encoded.csv");
    return d;
  });
  const auto split = stage("split", [&] {
    return stratified_split(data, cfg.train.holdout_fraction, cfg.train.seed);
  });
  report["dataset"] = {{"records", data.size()},
                       {"anomalous_fraction", round6(synth.anomalous_fraction)},
                       {"train_rows", split.train.size()},
                       {"holdout_rows", split.holdout.size()},
                       {"episodes", episodes}};

  // train-tree
  const auto tree = stage("train-tree", [&] {
    auto t = fit_tree(split.train, cfg.tree);
    write_text(out / "tree.json", tree_to_json(t));
    return t;
  });
  const auto tree_cm = stage("eval", [&] {
    std::vector<std::uint8_t> preds;
    for (const auto& fv : split.holdout.features) preds.push_back(predict(tree, fv));
    return confusion(preds, split.holdout.labels);
  });

  // train-mlp
  const auto trained = stage("train-mlp", [&] {
    auto res = train_mlp(split.train, split.holdout, cfg.mlp, cfg.train);
    std::ostringstream curve;
    res.second.write_curve_csv(curve);
    write_text(out / "mlp_curve.csv", curve.str());
    return res;
  });
  const MlpModel& mlp = trained.first;
  const TrainReport& train_report = trained.second;
  report["tree"] = {{"node_count", tree.nodes.size()},
                    {"depth", tree.depth()},
                    {"holdout", metrics_json(tree_cm)}};
  report["mlp"] = {
      {"layer_sizes", cfg.mlp.layer_sizes},
      {"parameters", mlp.parameter_count()},
      {"epochs", cfg.train.epochs},
      {"holdout", metrics_json(train_report.holdout_confusion)},
      {"final_train_accuracy",
       round6(train_report.train_accuracy.empty() ? 0.0 : train_report.train_accuracy.back())},
      {"final_holdout_accuracy",
       round6(train_report.holdout_accuracy.empty() ? 0.0 : train_report.holdout_accuracy.back())}};

  // export
  stage("export", [&] {
    const auto bin = save_mlp(mlp);
    write_bytes(out / "mlp.bin", std::string_view(reinterpret_cast<const char*>(bin.data()), bin.size()));
    const auto mlp_src = emit_mlp_source(mlp);
    const auto tree_src = emit_tree_source(tree);
    write_text(out / "mlp" / "tids_model.c", mlp_src);
    write_text(out / "tree" / "tids_model.c", tree_src);
    const auto bin_size = size_report("mlp_binary", bin.size());
    const auto tree_size_r = size_report("tree_source", tree_src.size());
    report["sizes"] = {{"mlp_binary", size_json(bin_size)},
                       {"mlp_source", size_json(size_report("mlp_source", mlp_src.size()))},
                       {"tree_source", size_json(tree_size_r)},
                       {"tree_estimated_source_bytes", tree_size(tree).estimated_source_bytes},
                       {"tree_source_larger_than_mlp_binary", tree_size_r.bytes > bin_size.bytes}};
  });

  // filter-gated replay and power
  const auto gated = stage("filter", [&] {
    return gated_replay(synth.records, cfg.filter, tree, mlp);
  });
  report["filter"] = {{"flag_malformed", gated.flag_malformed},
                      {"flag_rate", gated.flag_rate},
                      {"model_invocations", gated.model_invocations},
                      {"gated_tree", metrics_json(gated.tree)},
                      {"gated_mlp", metrics_json(gated.mlp)}};
  const double share = synth.records.empty()
                           ? 0.0
                           : static_cast<double>(gated.model_invocations) /
                                 static_cast<double>(synth.records.size());
  report["power"] = stage("power", [&] { return power_summary(share, cfg.power, cfg.battery); });

  // verify
  bool verify_failed = false;
  stage("verify", [&] {
    VerifyRequest req;
    req.driver_source = cfg.verify.driver_source;
    req.vectors = cfg.verify.vectors;
    req.seed = cfg.seed;
    req.tolerance = cfg.verify.score_tolerance;

    req.kind = ModelKind::Tree;
    req.model_source = out / "tree" / "tids_model.c";
    req.work_dir = out / "verify" / "tree";
    const auto tree_v = verify_model(req, [&](const FeatureVector& fv) {
      return Prediction{predict(tree, fv), leaf_score(tree, fv)};
    });
    req.kind = ModelKind::Mlp;
    req.model_source = out / "mlp" / "tids_model.c";
    req.work_dir = out / "verify" / "mlp";
    const auto mlp_v = verify_model(req, [&](const FeatureVector& fv) {
      const auto p = predict(mlp, fv);
      return Prediction{p.cls, p.score};
    });
    verify_failed = (!tree_v.skipped && !tree_v.passed) || (!mlp_v.skipped && !mlp_v.passed);
    report["verify"] = {{"tree", verify_json(tree_v)}, {"mlp", verify_json(mlp_v)}};
  });

  json hashes;
  stage("report", [&] {
    for (const auto* name : {"dataset.csv", "dataset.csv.ticks", "anonymized.csv", "encoded.csv",
                             "tree.json", "tree/tids_model.c", "mlp.bin", "mlp/tids_model.c",
                             "mlp_curve.csv"})
      hashes[name] = sha256_file(out / name);
    report["artifacts"] = hashes;
    write_text(out / "report.json", report.dump(2) + "\n");
  });
  return {report, out / "report.json", verify_failed};
}

}  // namespace tinyids
