// Copyright 2026 The pcmi Authors.
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

#include "pcmi/core/error.h"

namespace pcmi {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameter:
      return "parameter error";
    case ErrorCode::kShape:
      return "shape error";
    case ErrorCode::kUnsupported:
      return "unsupported";
    case ErrorCode::kCapacity:
      return "capacity error";
    case ErrorCode::kUsage:
      return "usage error";
    case ErrorCode::kPrecondition:
      return "precondition error";
    case ErrorCode::kNumerical:
      return "numerical error";
    case ErrorCode::kDiagnostic:
      return "diagnostic error";
    case ErrorCode::kConfig:
      return "config error";
  }
  return "error";
}

}  // namespace pcmi
