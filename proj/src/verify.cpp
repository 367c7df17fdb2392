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

#include "tinyids/verify.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tinyids/error.hpp"
#include "tinyids/export.hpp"
#include "tinyids/rng.hpp"

namespace tinyids {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

// Runs a shell command, returning (exit status, combined output).
std::pair<int, std::string> capture(const std::string& command) {
  std::FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (!pipe) throw Error(Errc::Compile, "cannot spawn: " + command);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  return {status, out};
}

bool parse_harness_line(const std::string& line, Prediction& p) {
  std::istringstream in(line);
  int cls = -1;
  double score = 0;
  std::string extra;
  if (!(in >> cls >> score) || (in >> extra)) return false;
  if (cls != 0 && cls != 1) return false;
  p.cls = static_cast<std::uint8_t>(cls);
  p.score = score;
  return true;
}

}  // namespace

std::vector<FeatureVector> verification_vectors(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<FeatureVector> out(n);
  for (auto& fv : out) {
    for (std::size_t j = 0; j < 7; ++j) fv[j] = (rng.next() >> 63) ? 1.0f : 0.0f;
    // 24-bit fractions are exact in f32.
    fv[kLenNorm] = static_cast<float>(rng.uniform_int(0, 1u << 24)) / float(1u << 24);
    fv[kWinNorm] = static_cast<float>(rng.uniform_int(0, 1u << 24)) / float(1u << 24);
  }
  return out;
}

std::string format_driver_input(const std::vector<FeatureVector>& vectors) {
  std::string s;
  char buf[32];
  for (const auto& fv : vectors) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(fv[j]));
      if (j) s += ' ';
      s += buf;
    }
    s += '\n';
  }
  return s;
}

VerifyReport compare_predictions(const std::vector<Prediction>& reference,
                                 const std::string& harness_stdout, ModelKind kind,
                                 double tolerance) {
  VerifyReport r;
  r.rows = reference.size();
  std::vector<std::string> lines;
  {
    std::istringstream in(harness_stdout);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  std::size_t bad_rows = 0;
  const auto note_divergence = [&](std::size_t row, const std::string& got) {
    ++bad_rows;
    if (r.divergent.size() < kMaxReportedDivergences)
      r.divergent.push_back({row, row < reference.size() ? reference[row] : Prediction{}, got});
  };
  for (std::size_t i = 0; i < reference.size(); ++i) {
    Prediction got;
    if (i >= lines.size() || !parse_harness_line(lines[i], got)) {
      ++r.class_mismatches;
      note_divergence(i, i < lines.size() ? lines[i] : std::string());
      continue;
    }
    const double diff = std::abs(got.score - reference[i].score);
    r.max_score_diff = std::max(r.max_score_diff, diff);
    const bool class_ok = got.cls == reference[i].cls;
    if (!class_ok) ++r.class_mismatches;
    if (!class_ok || (kind == ModelKind::Mlp && diff > tolerance)) note_divergence(i, lines[i]);
  }
  for (std::size_t i = reference.size(); i < lines.size(); ++i) note_divergence(i, lines[i]);
  r.passed = bad_rows == 0 && !reference.empty();
  if (reference.empty()) r.note = "no reference rows";
  return r;
}

std::string harness_compiler() {
  const char* cc = std::getenv("TIDS_CC");
  return cc && *cc ? cc : "cc";
}

std::string build_harness(const std::filesystem::path& model_source,
                          const std::filesystem::path& driver_source,
                          const std::filesystem::path& exe) {
  const std::string cmd = harness_compiler() +
                          " -std=c99 -pedantic -Wall -Wextra -O2 -o " +
                          shell_quote(exe.string()) + " " +
                          shell_quote(driver_source.string()) + " " +
                          shell_quote(model_source.string()) + " -lm";
  auto [status, log] = capture(cmd);
  if (status != 0) throw Error(Errc::Compile, "harness build failed:\n" + log);
  return log;
}

std::string run_harness(const std::filesystem::path& exe, const std::string& input,
                        const std::filesystem::path& work_dir) {
  const auto in_path = work_dir / "harness_input.txt";
  const auto out_path = work_dir / "harness_output.txt";
  write_bytes(in_path, input);
  const std::string cmd = shell_quote(exe.string()) + " < " + shell_quote(in_path.string()) +
                          " > " + shell_quote(out_path.string());
  const int status = std::system(cmd.c_str());
  if (status != 0)
    throw Error(Errc::VerifyMismatch, "harness exited with status " + std::to_string(status));
  const auto bytes = read_bytes(out_path);
  return {bytes.begin(), bytes.end()};
}

VerifyReport verify_model(const VerifyRequest& req,
                          const std::function<Prediction(const FeatureVector&)>& reference) {
  if (req.driver_source.empty() || !std::filesystem::exists(req.driver_source)) {
    VerifyReport r;
    r.skipped = true;
    r.note = "c-harness driver not available; cross-language check skipped";
    return r;
  }
  std::filesystem::create_directories(req.work_dir);
  const auto exe = req.work_dir / "tids_harness";
  std::string log;
  try {
    log = build_harness(req.model_source, req.driver_source, exe);
  } catch (const Error& e) {
    VerifyReport r;
    r.note = "harness build failed";
    r.compiler_log = e.what();
    return r;
  }
  const auto vectors = verification_vectors(req.vectors, req.seed);
  std::vector<Prediction> expected;
  expected.reserve(vectors.size());
  for (const auto& fv : vectors) expected.push_back(reference(fv));
  const auto out = run_harness(exe, format_driver_input(vectors), req.work_dir);
  auto report = compare_predictions(expected, out, req.kind, req.tolerance);
  report.compiler_log = log;
  return report;
}

}  // namespace tinyids
