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

#ifndef PCMI_CLI_RUNNER_H_
#define PCMI_CLI_RUNNER_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "pcmi/cli/config.h"
#include "pcmi/core/error.h"

namespace pcmi {

inline constexpr char kLibraryVersion[] = "1.0.0";
inline constexpr char kReportFormat[] = "pcmi-report";
inline constexpr int kReportSchemaVersion = 1;
// Budget fraction of the spot check stored in every report.
inline constexpr double kSpotCheckFraction = 0.1;

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitAcceptance = 4,
};

// Maps a library error to the process exit status.
int ExitCodeFor(ErrorCode code);

// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string Fnv1a64(const std::string& text);

// Digest over the config echo, results and spot check of a report.
std::string ReportDigest(const nlohmann::json& report);

struct RunOutcome {
  nlohmann::json report;
  std::string report_path;
  bool all_passed = false;
};

// Parses, validates and runs `config`, then writes the report and CSV
// sidecars. `output` overrides the config's `output` key. Check lines are
// printed to `log`.
RunOutcome RunConfig(Config config, const std::optional<std::string>& output,
                     std::ostream& log);

RunOutcome RunConfigFile(const std::string& path,
                         const std::optional<std::string>& output,
                         std::ostream& log);

struct VerifyResult {
  bool ok = false;
  bool version_mismatch = false;
  std::string message;
};

// Recomputes the stored spot check and compares it with the report. A corrupt
// report raises Error(kConfig).
VerifyResult VerifyReport(const nlohmann::json& report, std::ostream& log);
VerifyResult VerifyReportFile(const std::string& path, std::ostream& log);

}  // namespace pcmi

#endif  // PCMI_CLI_RUNNER_H_
