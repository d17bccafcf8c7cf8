// Copyright 2026 The g2x2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef G2X2_ERROR_HPP_
#define G2X2_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace g2x2 {

// Every failure surfaced by the library carries one of these kinds. The CLI
// maps them onto exit codes (see exit_code_for).
enum class ErrorKind {
  kTiesNotClassifiable,
  kInvalidSpec,
  kInvalidArgument,
  kNoConvergence,
  kNoEquilibrium,
  kEmptyDataset,
  kInsufficientData,
  kNonFinite,
  kDivergence,
  kParse,
  kRange,
  kUnknownGame,
  kQuotaInfeasible,
  kZeroVariance,
  kIo,
};

inline std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kTiesNotClassifiable: return "TiesNotClassifiable";
    case ErrorKind::kInvalidSpec: return "InvalidSpec";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kNoEquilibrium: return "NoEquilibrium";
    case ErrorKind::kEmptyDataset: return "EmptyDataset";
    case ErrorKind::kInsufficientData: return "InsufficientData";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kDivergence: return "Divergence";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kRange: return "RangeError";
    case ErrorKind::kUnknownGame: return "UnknownGame";
    case ErrorKind::kQuotaInfeasible: return "QuotaInfeasible";
    case ErrorKind::kZeroVariance: return "ZeroVariance";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// 2 usage, 3 data error, 4 numerical failure.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidSpec:
    case ErrorKind::kInvalidArgument:
      return 2;
    case ErrorKind::kNoConvergence:
    case ErrorKind::kNonFinite:
    case ErrorKind::kDivergence:
    case ErrorKind::kZeroVariance:
    case ErrorKind::kNoEquilibrium:
      return 4;
    default:
      return 3;
  }
}

}  // namespace g2x2

#endif  // G2X2_ERROR_HPP_
