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

#include "tinyids/error.hpp"

namespace tinyids {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::UnlabeledRecord: return "UnlabeledRecord";
    case Errc::NonMonotonicTick: return "NonMonotonicTick";
    case Errc::EmptyNode: return "EmptyNode";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::SingleClassDataset: return "SingleClassDataset";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::BadMagic: return "BadMagic";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroDuration: return "ZeroDuration";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::Config: return "Config";
    case Errc::Compile: return "Compile";
    case Errc::VerifyMismatch: return "VerifyMismatch";
  }
  return "?";
}

}  // namespace tinyids
