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

#include "tinyids/config.hpp"

#include <fstream>
#include <set>

#include "tinyids/error.hpp"

namespace tinyids {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const char* section,
                    std::initializer_list<const char*> known) {
  if (!obj.is_object())
    throw Error(Errc::Config, std::string("config section '") + section + "' must be an object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key))
      throw Error(Errc::Config, std::string("unknown key '") + key + "' in " + section);
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

void PipelineConfig::apply_seed(std::uint64_t s) {
  seed = s;
  scenario.seed = s;
  train.seed = s;
}

void PipelineConfig::validate() const {
  scenario.validate();
  filter.validate();
  tree.validate();
  mlp.validate();
  train.validate();
  power.validate();
  if (!(battery.peukert_k >= 1)) throw Error(Errc::Config, "battery.peukert_k must be >= 1");
  if (!(battery.reserve_pct >= 0 && battery.reserve_pct < 100))
    throw Error(Errc::Config, "battery.reserve_pct must be in [0, 100)");
  if (!(battery.bus_voltage_v > 0)) throw Error(Errc::Config, "battery.bus_voltage_v must be > 0");
  if (verify.vectors == 0) throw Error(Errc::Config, "verify.vectors must be >= 1");
  if (output_dir.empty()) throw Error(Errc::Config, "output_dir must not be empty");
}

PipelineConfig config_from_json(const json& doc) {
  PipelineConfig cfg;
  try {
    reject_unknown(doc, "config",
                   {"seed", "output_dir", "scenario", "filter", "tree", "mlp", "train",
                    "power", "battery", "verify"});
    read(doc, "output_dir", cfg.output_dir);

    if (doc.contains("scenario")) {
      const auto& s = doc.at("scenario");
      reject_unknown(s, "scenario", {"duration_ms", "scale", "benign", "attacks"});
      read(s, "duration_ms", cfg.scenario.duration_ms);
      read(s, "scale", cfg.scenario.scale);
      if (s.contains("benign")) {
        const auto& b = s.at("benign");
        reject_unknown(b, "scenario.benign", {"telemetry_period_ms", "keepalive_period_ms", "ambient_pps"});
        read(b, "telemetry_period_ms", cfg.scenario.benign.telemetry_period_ms);
        read(b, "keepalive_period_ms", cfg.scenario.benign.keepalive_period_ms);
        read(b, "ambient_pps", cfg.scenario.benign.ambient_pps);
      }
      if (s.contains("attacks")) {
        cfg.scenario.attacks.clear();
        for (const auto& a : s.at("attacks")) {
          reject_unknown(a, "scenario.attacks[]", {"kind", "rate_pps", "duration_ms", "count"});
          AttackSpec spec;
          spec.kind = attack_kind_from_string(a.at("kind").get<std::string>());
          read(a, "rate_pps", spec.rate_pps);
          read(a, "duration_ms", spec.duration_ms);
          read(a, "count", spec.count);
          cfg.scenario.attacks.push_back(spec);
        }
      }
    }
    if (doc.contains("filter")) {
      const auto& f = doc.at("filter");
      reject_unknown(f, "filter",
                     {"malformed_codes", "rate_window_ms", "rate_threshold", "syn_only"});
      if (f.contains("malformed_codes")) {
        cfg.filter.malformed_codes.clear();
        for (const auto& c : f.at("malformed_codes")) {
          const auto v = c.get<unsigned>();
          if (v > 0xff) throw Error(Errc::Config, "filter.malformed_codes entries are bytes");
          cfg.filter.malformed_codes.insert(static_cast<std::uint8_t>(v));
        }
      }
      read(f, "rate_window_ms", cfg.filter.rate_window_ms);
      read(f, "rate_threshold", cfg.filter.rate_threshold);
      read(f, "syn_only", cfg.filter.syn_only);
    }
    if (doc.contains("tree")) {
      const auto& t = doc.at("tree");
      reject_unknown(t, "tree", {"max_depth", "min_samples_split", "min_impurity_decrease"});
      read(t, "max_depth", cfg.tree.max_depth);
      read(t, "min_samples_split", cfg.tree.min_samples_split);
      read(t, "min_impurity_decrease", cfg.tree.min_impurity_decrease);
    }
    if (doc.contains("mlp")) {
      const auto& m = doc.at("mlp");
      reject_unknown(m, "mlp", {"layer_sizes"});
      read(m, "layer_sizes", cfg.mlp.layer_sizes);
    }
    if (doc.contains("train")) {
      const auto& t = doc.at("train");
      reject_unknown(t, "train", {"epochs", "learning_rate", "batch_size", "holdout_fraction"});
      read(t, "epochs", cfg.train.epochs);
      read(t, "learning_rate", cfg.train.learning_rate);
      read(t, "batch_size", cfg.train.batch_size);
      read(t, "holdout_fraction", cfg.train.holdout_fraction);
    }
    if (doc.contains("power")) {
      const auto& p = doc.at("power");
      reject_unknown(p, "power", {"normal_w", "filter_w", "model_filter_w"});
      read(p, "normal_w", cfg.power.normal_w);
      read(p, "filter_w", cfg.power.filter_w);
      read(p, "model_filter_w", cfg.power.model_filter_w);
    }
    if (doc.contains("battery")) {
      const auto& b = doc.at("battery");
      reject_unknown(b, "battery", {"peukert_k", "reserve_pct", "bus_voltage_v"});
      read(b, "peukert_k", cfg.battery.peukert_k);
      read(b, "reserve_pct", cfg.battery.reserve_pct);
      read(b, "bus_voltage_v", cfg.battery.bus_voltage_v);
    }
    if (doc.contains("verify")) {
      const auto& v = doc.at("verify");
      reject_unknown(v, "verify", {"driver_source", "vectors", "score_tolerance"});
      read(v, "driver_source", cfg.verify.driver_source);
      read(v, "vectors", cfg.verify.vectors);
      read(v, "score_tolerance", cfg.verify.score_tolerance);
    }
    cfg.apply_seed(doc.value("seed", cfg.seed));
  } catch (const json::exception& e) {
    throw Error(Errc::Config, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Config, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::Config, path.string() + ": " + e.what());
  }
  auto cfg = config_from_json(doc);
  // Relative driver paths are resolved against the config file's directory.
  if (!cfg.verify.driver_source.empty() &&
      std::filesystem::path(cfg.verify.driver_source).is_relative())
    cfg.verify.driver_source =
        (path.parent_path() / cfg.verify.driver_source).lexically_normal().string();
  return cfg;
}

json config_to_json(const PipelineConfig& cfg) {
  json attacks = json::array();
  for (const auto& a : cfg.scenario.attacks)
    attacks.push_back({{"kind", to_string(a.kind)},
                       {"rate_pps", a.rate_pps},
                       {"duration_ms", a.duration_ms},
                       {"count", a.count}});
  return {
      {"seed", cfg.seed},
      {"output_dir", cfg.output_dir},
      {"scenario",
       {{"duration_ms", cfg.scenario.duration_ms},
        {"scale", cfg.scenario.scale},
        {"benign",
         {{"telemetry_period_ms", cfg.scenario.benign.telemetry_period_ms},
          {"keepalive_period_ms", cfg.scenario.benign.keepalive_period_ms},
          {"ambient_pps", cfg.scenario.benign.ambient_pps}}},
        {"attacks", attacks}}},
      {"filter",
       {{"malformed_codes", cfg.filter.malformed_codes},
        {"rate_window_ms", cfg.filter.rate_window_ms},
        {"rate_threshold", cfg.filter.rate_threshold},
        {"syn_only", cfg.filter.syn_only}}},
      {"tree",
       {{"max_depth", cfg.tree.max_depth},
        {"min_samples_split", cfg.tree.min_samples_split},
        {"min_impurity_decrease", cfg.tree.min_impurity_decrease}}},
      {"mlp", {{"layer_sizes", cfg.mlp.layer_sizes}}},
      {"train",
       {{"epochs", cfg.train.epochs},
        {"learning_rate", cfg.train.learning_rate},
        {"batch_size", cfg.train.batch_size},
        {"holdout_fraction", cfg.train.holdout_fraction}}},
      {"power",
       {{"normal_w", cfg.power.normal_w},
        {"filter_w", cfg.power.filter_w},
        {"model_filter_w", cfg.power.model_filter_w}}},
      {"battery",
       {{"peukert_k", cfg.battery.peukert_k},
        {"reserve_pct", cfg.battery.reserve_pct},
        {"bus_voltage_v", cfg.battery.bus_voltage_v}}},
      {"verify",
       {{"driver_source", cfg.verify.driver_source},
        {"vectors", cfg.verify.vectors},
        {"score_tolerance", cfg.verify.score_tolerance}}},
  };
}

}  // namespace tinyids
