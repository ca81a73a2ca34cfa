// Copyright 2026 The symdet Authors
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
#include <string_view>

namespace symdet {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kIndexOutOfRange,
  kNotPositiveDefinite,
  kSingular,
  kDegenerateSpectrum,
  kZeroSymplecticEigenvalue,
  kPivotFailure,
  kNegativeNorm,
  kNotSymplectic,
  kCertificationFailed,
  kDegeneracyNotBroken,
  kNumericalBackend,
  kParse,
  kIo,
};

/// Stable token printed by the CLI in front of every error message.
constexpr std::string_view error_token(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "E_INVALID_ARGUMENT";
    case ErrorCode::kDimensionMismatch: return "E_DIMENSION";
    case ErrorCode::kIndexOutOfRange: return "E_INDEX";
    case ErrorCode::kNotPositiveDefinite: return "E_NOT_PD";
    case ErrorCode::kSingular: return "E_SINGULAR";
    case ErrorCode::kDegenerateSpectrum: return "E_DEGENERATE";
    case ErrorCode::kZeroSymplecticEigenvalue: return "E_ZERO_EIGENVALUE";
    case ErrorCode::kPivotFailure: return "E_PIVOT";
    case ErrorCode::kNegativeNorm: return "E_NEGATIVE_NORM";
    case ErrorCode::kNotSymplectic: return "E_NOT_SYMPLECTIC";
    case ErrorCode::kCertificationFailed: return "E_CERTIFICATION";
    case ErrorCode::kDegeneracyNotBroken: return "E_DEGENERACY_NOT_BROKEN";
    case ErrorCode::kNumericalBackend: return "E_NUMERICAL";
    case ErrorCode::kParse: return "E_PARSE";
    case ErrorCode::kIo: return "E_IO";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace symdet
