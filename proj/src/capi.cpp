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

#include "tinyids/tinyids.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "tinyids/capture.hpp"
#include "tinyids/config.hpp"
#include "tinyids/error.hpp"
#include "tinyids/export.hpp"
#include "tinyids/features.hpp"
#include "tinyids/mlp.hpp"
#include "tinyids/pipeline.hpp"
#include "tinyids/power.hpp"
#include "tinyids/synth.hpp"
#include "tinyids/tree.hpp"
#include "tinyids/verify.hpp"

struct tids_config {
  tinyids::PipelineConfig cfg;
};

struct tids_records {
  std::vector<tinyids::CaptureRecord> records;
};

struct tids_tree {
  tinyids::TreeModel model;
};

struct tids_mlp {
  tinyids::MlpModel model;
};

namespace {

namespace fs = std::filesystem;
using tinyids::Errc;
using tinyids::Error;
using tinyids::ErrorCategory;

thread_local std::string g_last_error;

tids_status status_of(const Error& e) {
  switch (tinyids::category(e.code())) {
    case ErrorCategory::InvalidArgument: return TIDS_E_INVALID_ARGUMENT;
    case ErrorCategory::Io: return TIDS_E_IO;
    case ErrorCategory::Config: return TIDS_E_CONFIG;
    case ErrorCategory::Data: return TIDS_E_DATA;
    case ErrorCategory::Training: return TIDS_E_TRAINING;
    case ErrorCategory::Verify: return TIDS_E_VERIFY;
  }
  return TIDS_E_INTERNAL;
}

// Runs `body`, translating every exception into a status code.
template <typename F>
tids_status guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return TIDS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const fs::filesystem_error& e) {
    g_last_error = e.what();
    return TIDS_E_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TIDS_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TIDS_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return TIDS_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(Errc::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tinyids::FeatureVector to_fv(const float* fv) {
  tinyids::FeatureVector v{};
  std::copy(fv, fv + tinyids::kFeatureCount, v.begin());
  return v;
}

void fill_metrics(const tinyids::ConfusionMatrix& cm, tids_metrics* out) {
  const auto m = tinyids::prf1(cm);
  *out = {cm.tp, cm.fp, cm.tn, cm.fn, m.precision, m.recall, m.f1, cm.accuracy()};
}

template <typename Predict>
void evaluate(const tids_records* recs, tids_metrics* out, Predict&& predict) {
  require(recs, "records");
  require(out, "out");
  const auto data = tinyids::encode_dataset(recs->records);
  std::vector<std::uint8_t> preds;
  preds.reserve(data.size());
  for (const auto& fv : data.features) preds.push_back(predict(fv));
  fill_metrics(tinyids::confusion(preds, data.labels), out);
}

nlohmann::json verify_report_json(const tinyids::VerifyReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& d : r.divergent)
    rows.push_back({{"row", d.row},
                    {"expected_class", d.expected.cls},
                    {"expected_score", tinyids::round6(d.expected.score)},
                    {"got", d.got}});
  return {{"skipped", r.skipped},
          {"passed", r.passed},
          {"note", r.note},
          {"rows", r.rows},
          {"class_mismatches", r.class_mismatches},
          {"max_score_diff", r.max_score_diff},
          {"divergent", rows},
          {"compiler_log", r.compiler_log}};
}

void run_verify(tinyids::ModelKind kind, const char* source_path, const tids_config* cfg,
                const char* work_dir, tids_verify_result* out, char** report_json,
                const std::function<tinyids::Prediction(const tinyids::FeatureVector&)>& ref) {
  require(source_path, "source_path");
  require(cfg, "config");
  require(work_dir, "work_dir");
  require(out, "out");
  tinyids::VerifyRequest req;
  req.kind = kind;
  req.model_source = source_path;
  req.driver_source = cfg->cfg.verify.driver_source;
  req.work_dir = work_dir;
  req.vectors = cfg->cfg.verify.vectors;
  req.seed = cfg->cfg.seed;
  req.tolerance = cfg->cfg.verify.score_tolerance;
  const auto r = tinyids::verify_model(req, ref);
  *out = {r.skipped ? 1 : 0, r.passed ? 1 : 0, r.rows, r.class_mismatches, r.max_score_diff};
  if (report_json) *report_json = dup_string(verify_report_json(r).dump(2));
}

}  // namespace

extern "C" {

const char* tids_version(void) { return "1.0.0"; }

const char* tids_last_error(void) { return g_last_error.c_str(); }

const char* tids_status_name(tids_status status) {
  switch (status) {
    case TIDS_OK: return "ok";
    case TIDS_E_INVALID_ARGUMENT: return "invalid argument";
    case TIDS_E_IO: return "i/o error";
    case TIDS_E_CONFIG: return "config error";
    case TIDS_E_DATA: return "data error";
    case TIDS_E_TRAINING: return "training error";
    case TIDS_E_VERIFY: return "verification error";
    case TIDS_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int tids_exit_code(tids_status status) {
  switch (status) {
    case TIDS_OK: return 0;
    case TIDS_E_CONFIG: return 2;
    case TIDS_E_INVALID_ARGUMENT:
    case TIDS_E_IO:
    case TIDS_E_DATA: return 3;
    case TIDS_E_TRAINING: return 4;
    case TIDS_E_VERIFY: return 5;
    default: return 1;
  }
}

void tids_string_free(char* s) { std::free(s); }

tids_status tids_config_default(tids_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new tids_config{};
  });
}

tids_status tids_config_load(const char* path, tids_config** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new tids_config{tinyids::load_config(path)};
  });
}

tids_status tids_config_set_seed(tids_config* cfg, uint64_t seed) {
  return guard([&] {
    require(cfg, "config");
    cfg->cfg.apply_seed(seed);
  });
}

tids_status tids_config_set_output_dir(tids_config* cfg, const char* dir) {
  return guard([&] {
    require(cfg, "config");
    require(dir, "dir");
    if (!*dir) throw Error(Errc::Config, "output_dir must not be empty");
    cfg->cfg.output_dir = dir;
  });
}

tids_status tids_config_set_driver(tids_config* cfg, const char* driver_source) {
  return guard([&] {
    require(cfg, "config");
    cfg->cfg.verify.driver_source = driver_source ? driver_source : "";
  });
}

tids_status tids_config_output_dir(const tids_config* cfg, char** out) {
  return guard([&] {
    require(cfg, "config");
    require(out, "out");
    *out = dup_string(cfg->cfg.output_dir);
  });
}

tids_status tids_config_to_json(const tids_config* cfg, char** out_json) {
  return guard([&] {
    require(cfg, "config");
    require(out_json, "out_json");
    *out_json = dup_string(tinyids::config_to_json(cfg->cfg).dump(2));
  });
}

void tids_config_free(tids_config* cfg) { delete cfg; }

tids_status tids_records_synthesize(const tids_config* cfg, tids_records** out,
                                    double* anomalous_fraction) {
  return guard([&] {
    require(cfg, "config");
    require(out, "out");
    auto res = tinyids::synthesize(cfg->cfg.scenario);
    if (anomalous_fraction) *anomalous_fraction = res.anomalous_fraction;
    *out = new tids_records{std::move(res.records)};
  });
}

tids_status tids_records_parse_log(const char* path, tids_records** out, size_t* issues) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, std::string("cannot open ") + path);
    auto parsed = tinyids::parse_log(in);
    if (issues) *issues = parsed.issues.size();
    *out = new tids_records{std::move(parsed.records)};
  });
}

tids_status tids_records_read_csv(const char* path, tids_records** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    auto recs = tinyids::read_csv(fs::path(path));
    const auto ticks = tinyids::ticks_path_for(path);
    if (fs::exists(ticks)) tinyids::read_ticks(recs, ticks);
    *out = new tids_records{std::move(recs)};
  });
}

tids_status tids_records_write_csv(const tids_records* recs, const char* path, int with_ticks) {
  return guard([&] {
    require(recs, "records");
    require(path, "path");
    tinyids::write_csv(recs->records, fs::path(path));
    if (with_ticks) tinyids::write_ticks(recs->records, tinyids::ticks_path_for(path));
  });
}

tids_status tids_records_write_encoded(const tids_records* recs, const char* path) {
  return guard([&] {
    require(recs, "records");
    require(path, "path");
    tinyids::write_encoded_csv(tinyids::encode_dataset(recs->records), fs::path(path));
  });
}

tids_status tids_records_anonymize(tids_records* recs) {
  return guard([&] {
    require(recs, "records");
    for (auto& r : recs->records) r = tinyids::anonymize(std::move(r));
  });
}

size_t tids_records_count(const tids_records* recs) { return recs ? recs->records.size() : 0; }

tids_status tids_records_label_counts(const tids_records* recs, size_t* legit,
                                      size_t* anomalous, size_t* unlabeled) {
  return guard([&] {
    require(recs, "records");
    size_t c[3] = {0, 0, 0};
    for (const auto& r : recs->records) ++c[static_cast<int>(r.label)];
    if (legit) *legit = c[0];
    if (anomalous) *anomalous = c[1];
    if (unlabeled) *unlabeled = c[2];
  });
}

tids_status tids_records_line(const tids_records* recs, size_t index, char** out) {
  return guard([&] {
    require(recs, "records");
    require(out, "out");
    if (index >= recs->records.size()) throw Error(Errc::InvalidArgument, "record index out of range");
    *out = dup_string(tinyids::serialize_line(recs->records[index]));
  });
}

tids_status tids_records_features(const tids_records* recs, size_t index,
                                  float fv[TIDS_FEATURE_COUNT], int* label) {
  return guard([&] {
    require(recs, "records");
    require(fv, "fv");
    if (index >= recs->records.size()) throw Error(Errc::InvalidArgument, "record index out of range");
    const auto& r = recs->records[index];
    const auto v = tinyids::encode(r);
    std::copy(v.begin(), v.end(), fv);
    if (label)
      *label = r.label == tinyids::Label::Unlabeled ? -1 : (r.label == tinyids::Label::Anomalous ? 1 : 0);
  });
}

tids_status tids_records_split(const tids_records* recs, const tids_config* cfg,
                               tids_records** train, tids_records** holdout) {
  return guard([&] {
    require(recs, "records");
    require(cfg, "config");
    require(train, "train");
    require(holdout, "holdout");
    const auto data = tinyids::encode_dataset(recs->records);
    const auto idx = tinyids::stratified_indices(data.labels, cfg->cfg.train.holdout_fraction,
                                                 cfg->cfg.train.seed);
    auto t = std::make_unique<tids_records>();
    auto h = std::make_unique<tids_records>();
    for (const auto i : idx.train) t->records.push_back(recs->records[i]);
    for (const auto i : idx.holdout) h->records.push_back(recs->records[i]);
    *train = t.release();
    *holdout = h.release();
  });
}

void tids_records_free(tids_records* recs) { delete recs; }

tids_status tids_tree_fit(const tids_records* train, const tids_config* cfg, tids_tree** out) {
  return guard([&] {
    require(train, "train");
    require(cfg, "config");
    require(out, "out");
    *out = new tids_tree{tinyids::fit_tree(tinyids::encode_dataset(train->records), cfg->cfg.tree)};
  });
}

tids_status tids_tree_load(const char* json_path, tids_tree** out) {
  return guard([&] {
    require(json_path, "json_path");
    require(out, "out");
    const auto bytes = tinyids::read_bytes(json_path);
    *out = new tids_tree{tinyids::tree_from_json(std::string(bytes.begin(), bytes.end()))};
  });
}

tids_status tids_tree_save(const tids_tree* tree, const char* json_path) {
  return guard([&] {
    require(tree, "tree");
    require(json_path, "json_path");
    tinyids::write_bytes(json_path, tinyids::tree_to_json(tree->model));
  });
}

tids_status tids_tree_predict(const tids_tree* tree, const float fv[TIDS_FEATURE_COUNT],
                              int* cls, float* score) {
  return guard([&] {
    require(tree, "tree");
    require(fv, "fv");
    const auto v = to_fv(fv);
    if (cls) *cls = tinyids::predict(tree->model, v);
    if (score) *score = tinyids::leaf_score(tree->model, v);
  });
}

tids_status tids_tree_evaluate(const tids_tree* tree, const tids_records* recs, tids_metrics* out) {
  return guard([&] {
    require(tree, "tree");
    evaluate(recs, out, [&](const tinyids::FeatureVector& fv) { return tinyids::predict(tree->model, fv); });
  });
}

tids_status tids_tree_emit_source(const tids_tree* tree, const char* c_path, size_t* bytes) {
  return guard([&] {
    require(tree, "tree");
    require(c_path, "c_path");
    const auto src = tinyids::emit_tree_source(tree->model);
    tinyids::write_bytes(c_path, src);
    if (bytes) *bytes = src.size();
  });
}

size_t tids_tree_node_count(const tids_tree* tree) { return tree ? tree->model.nodes.size() : 0; }

size_t tids_tree_estimated_source_bytes(const tids_tree* tree) {
  return tree ? tinyids::tree_size(tree->model).estimated_source_bytes : 0;
}

void tids_tree_free(tids_tree* tree) { delete tree; }

tids_status tids_mlp_train(const tids_records* train, const tids_records* holdout,
                           const tids_config* cfg, tids_mlp** out, const char* curve_csv_path) {
  return guard([&] {
    require(train, "train");
    require(cfg, "config");
    require(out, "out");
    const auto t = tinyids::encode_dataset(train->records);
    const auto h = holdout ? tinyids::encode_dataset(holdout->records) : tinyids::LabeledDataset{};
    auto [model, report] = tinyids::train_mlp(t, h, cfg->cfg.mlp, cfg->cfg.train);
    if (curve_csv_path) {
      std::ostringstream curve;
      report.write_curve_csv(curve);
      tinyids::write_bytes(curve_csv_path, curve.str());
    }
    *out = new tids_mlp{std::move(model)};
  });
}

tids_status tids_mlp_load(const char* bin_path, tids_mlp** out) {
  return guard([&] {
    require(bin_path, "bin_path");
    require(out, "out");
    *out = new tids_mlp{tinyids::load_mlp(tinyids::read_bytes(bin_path))};
  });
}

tids_status tids_mlp_save(const tids_mlp* mlp, const char* bin_path, size_t* bytes) {
  return guard([&] {
    require(mlp, "mlp");
    require(bin_path, "bin_path");
    const auto bin = tinyids::save_mlp(mlp->model);
    tinyids::write_bytes(bin_path, std::string_view(reinterpret_cast<const char*>(bin.data()), bin.size()));
    if (bytes) *bytes = bin.size();
  });
}

tids_status tids_mlp_predict(const tids_mlp* mlp, const float fv[TIDS_FEATURE_COUNT], int* cls,
                             float* score) {
  return guard([&] {
    require(mlp, "mlp");
    require(fv, "fv");
    const auto p = tinyids::predict(mlp->model, to_fv(fv));
    if (cls) *cls = p.cls;
    if (score) *score = static_cast<float>(p.score);
  });
}

tids_status tids_mlp_evaluate(const tids_mlp* mlp, const tids_records* recs, tids_metrics* out) {
  return guard([&] {
    require(mlp, "mlp");
    evaluate(recs, out, [&](const tinyids::FeatureVector& fv) { return tinyids::predict(mlp->model, fv).cls; });
  });
}

tids_status tids_mlp_emit_source(const tids_mlp* mlp, const char* c_path, size_t* bytes) {
  return guard([&] {
    require(mlp, "mlp");
    require(c_path, "c_path");
    const auto src = tinyids::emit_mlp_source(mlp->model);
    tinyids::write_bytes(c_path, src);
    if (bytes) *bytes = src.size();
  });
}

size_t tids_mlp_parameter_count(const tids_mlp* mlp) { return mlp ? mlp->model.parameter_count() : 0; }

void tids_mlp_free(tids_mlp* mlp) { delete mlp; }

tids_status tids_power_from_trace_csv(const char* path, const tids_config* cfg,
                                      tids_power_summary* out) {
  return guard([&] {
    require(path, "path");
    require(cfg, "config");
    require(out, "out");
    const auto trace = tinyids::read_trace_csv(fs::path(path));
    const auto& c = cfg->cfg;
    out->hours = tinyids::total_hours(trace);
    out->energy_wh = tinyids::energy_wh(trace, c.power);
    out->avg_current_a = tinyids::average_current_a(trace, c.power, c.battery.bus_voltage_v);
    out->battery_ah = tinyids::size_for_trace(trace, c.power, c.battery);
  });
}

tids_status tids_verify_tree(const tids_tree* tree, const char* source_path, const tids_config* cfg,
                             const char* work_dir, tids_verify_result* out, char** report_json) {
  return guard([&] {
    require(tree, "tree");
    run_verify(tinyids::ModelKind::Tree, source_path, cfg, work_dir, out, report_json,
               [&](const tinyids::FeatureVector& fv) {
                 return tinyids::Prediction{tinyids::predict(tree->model, fv),
                                            tinyids::leaf_score(tree->model, fv)};
               });
  });
}

tids_status tids_verify_mlp(const tids_mlp* mlp, const char* source_path, const tids_config* cfg,
                            const char* work_dir, tids_verify_result* out, char** report_json) {
  return guard([&] {
    require(mlp, "mlp");
    run_verify(tinyids::ModelKind::Mlp, source_path, cfg, work_dir, out, report_json,
               [&](const tinyids::FeatureVector& fv) {
                 const auto p = tinyids::predict(mlp->model, fv);
                 return tinyids::Prediction{p.cls, p.score};
               });
  });
}

tids_status tids_pipeline_run(const tids_config* cfg, char** report_json, int* verify_failed) {
  return guard([&] {
    require(cfg, "config");
    const auto res = tinyids::run_pipeline(cfg->cfg);
    if (report_json) *report_json = dup_string(res.report.dump(2));
    if (verify_failed) *verify_failed = res.verify_failed ? 1 : 0;
  });
}

}  // extern "C"
