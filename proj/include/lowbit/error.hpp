/* Copyright 2026 The Lowbit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef LOWBIT_ERROR_HPP_
#define LOWBIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lowbit {

enum class ErrorCode {
  NotOnGrid,
  RangeExceeded,
  OutOfRange,
  IncompatibleLayout,
  LaneMismatch,
  LengthMismatch,
  ShapeMismatch,
  UnsupportedScheme,
  UnsupportedBits,
  ParseError,
  DanglingWeightRef,
  UnknownOpKind,
  BadVersion,
  UnknownLayerInConfig,
  FoldEvaluationError,
  UnknownPreset,
  IoError,
  InvalidArgument,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotOnGrid: return "NotOnGrid";
    case ErrorCode::RangeExceeded: return "RangeExceeded";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IncompatibleLayout: return "IncompatibleLayout";
    case ErrorCode::LaneMismatch: return "LaneMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnsupportedScheme: return "UnsupportedScheme";
    case ErrorCode::UnsupportedBits: return "UnsupportedBits";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DanglingWeightRef: return "DanglingWeightRef";
    case ErrorCode::UnknownOpKind: return "UnknownOpKind";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::UnknownLayerInConfig: return "UnknownLayerInConfig";
    case ErrorCode::FoldEvaluationError: return "FoldEvaluationError";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Library-wide exception type. The code identifies the contract violation,
/// the message names the offending value, layer or file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lowbit

#endif  // LOWBIT_ERROR_HPP_
