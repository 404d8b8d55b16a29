// Copyright 2026 The FSOF Authors
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

namespace fsof {

// Every library error carries a stable machine-readable code; the CLI echoes
// it in the JSON error object it writes to stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define FSOF_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// Invariant violation on a value type (bad intrinsics, bounds, config).
FSOF_DEFINE_ERROR(InvalidArgument);

// Geometry.
FSOF_DEFINE_ERROR(HorizonError);
FSOF_DEFINE_ERROR(BehindCameraError);
FSOF_DEFINE_ERROR(PointBehindCameraError);

// Map-level checks.
FSOF_DEFINE_ERROR(DimensionMismatch);
FSOF_DEFINE_ERROR(UnitsMismatch);
FSOF_DEFINE_ERROR(OutOfBounds);
FSOF_DEFINE_ERROR(EmptyInput);
FSOF_DEFINE_ERROR(EmptyOverlap);

// Fitting and optimisation.
FSOF_DEFINE_ERROR(InsufficientRows);
FSOF_DEFINE_ERROR(DegenerateFit);
FSOF_DEFINE_ERROR(NonFinite);

// Codecs.
FSOF_DEFINE_ERROR(IoError);
FSOF_DEFINE_ERROR(BadMagic);
FSOF_DEFINE_ERROR(WrongBitDepth);
FSOF_DEFINE_ERROR(WrongChannelCount);
FSOF_DEFINE_ERROR(TruncatedFile);
FSOF_DEFINE_ERROR(ConfigError);

#undef FSOF_DEFINE_ERROR

}  // namespace fsof
