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

#ifndef PCMI_CORE_ERROR_H_
#define PCMI_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcmi {

// Categories of failure raised by the library. The CLI maps these onto
// process exit codes.
enum class ErrorCode {
  kParameter,     // A scalar argument is outside its admissible range.
  kShape,         // Mismatched lengths or dimensions.
  kUnsupported,   // Operation not defined for the given problem kind.
  kCapacity,      // Request exceeds a hard computational limit.
  kUsage,         // API misuse, e.g. mixing objects from different draws.
  kPrecondition,  // A structural precondition on an input does not hold.
  kNumerical,     // A numerical routine failed to reach its tolerance.
  kDiagnostic,    // An online invariant check was violated.
  kConfig,        // Malformed or unknown configuration.
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws Error(code, message) unless `condition` holds.
inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace pcmi

#endif  // PCMI_CORE_ERROR_H_
