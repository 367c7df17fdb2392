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

#include <stdexcept>
#include <string>

namespace tinyids {

// Every failure the core can raise. The C API and the CLI collapse these into
// coarser status / exit codes through category().
enum class Errc {
  InvalidArgument,
  Io,
  MalformedHeader,
  MalformedRow,
  UnlabeledRecord,
  NonMonotonicTick,
  EmptyNode,
  EmptyDataset,
  SingleClassDataset,
  ShapeMismatch,
  BadMagic,
  VersionMismatch,
  LengthMismatch,
  ZeroDuration,
  EmptyInput,
  Config,
  Compile,
  VerifyMismatch,
};

enum class ErrorCategory { InvalidArgument, Io, Config, Data, Training, Verify };

constexpr ErrorCategory category(Errc code) {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::ShapeMismatch:
    case Errc::EmptyInput:
      return ErrorCategory::InvalidArgument;
    case Errc::Io:
      return ErrorCategory::Io;
    case Errc::Config:
      return ErrorCategory::Config;
    case Errc::EmptyNode:
    case Errc::EmptyDataset:
    case Errc::SingleClassDataset:
      return ErrorCategory::Training;
    case Errc::Compile:
    case Errc::VerifyMismatch:
      return ErrorCategory::Verify;
    default:
      return ErrorCategory::Data;
  }
}

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tinyids
