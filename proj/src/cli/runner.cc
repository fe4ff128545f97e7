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

#include "pcmi/cli/runner.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pcmi/cli/experiments.h"
#include "pcmi/core/parallel.h"

namespace pcmi {
namespace {

using nlohmann::json;

json ChecksJson(const std::vector<Check>& checks) {
  json out = json::array();
  for (const Check& c : checks) {
    out.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return out;
}

json RunSection(const ExperimentOutput& output) {
  return {{"results", output.results},
          {"checks", ChecksJson(output.checks)},
          {"all_passed", output.AllPassed()}};
}

// Numbers are compared with a relative tolerance that only absorbs text
// round-tripping; everything else must match exactly.
bool NumericallyEqual(const json& a, const json& b, const std::string& path,
                      std::string* where) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    if (x == y || std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y))) {
      return true;
    }
    *where = path;
    return false;
  }
  if (a.type() != b.type()) {
    *where = path;
    return false;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) {
      *where = path;
      return false;
    }
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key()) ||
          !NumericallyEqual(it.value(), b.at(it.key()), path + "." + it.key(), where)) {
        if (where->empty()) *where = path + "." + it.key();
        return false;
      }
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      *where = path;
      return false;
    }
    for (size_t i = 0; i < a.size(); ++i) {
      if (!NumericallyEqual(a[i], b[i], path + "[" + std::to_string(i) + "]", where)) {
        return false;
      }
    }
    return true;
  }
  if (a != b) {
    *where = path;
    return false;
  }
  return true;
}

std::string DefaultOutput(const std::string& kind) { return "pcmi_" + kind; }

void WriteText(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kConfig, "cannot write '" + path + "'");
  out << text;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNumerical:
    case ErrorCode::kDiagnostic:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

std::string Fnv1a64(const std::string& text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

std::string ReportDigest(const json& report) {
  const json payload = {{"config", report.at("config")},
                        {"run", report.at("run")},
                        {"spot_check", report.at("spot_check")}};
  return Fnv1a64(payload.dump());
}

RunOutcome RunConfig(Config config, const std::optional<std::string>& output,
                     std::ostream& log) {
  const json echo = config.Echo();
  const std::string configured_output =
      config.String("", "output", std::string());
  std::unique_ptr<Experiment> experiment = ParseExperiment(config);
  const std::string base = output ? *output
                           : configured_output.empty() ? DefaultOutput(experiment->kind())
                                                       : configured_output;

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const ExperimentOutput full = experiment->Run(1.0);
  const auto t1 = Clock::now();
  const ExperimentOutput spot = experiment->Run(kSpotCheckFraction);
  const auto t2 = Clock::now();

  json report;
  report["format"] = kReportFormat;
  report["schema_version"] = kReportSchemaVersion;
  report["library_version"] = kLibraryVersion;
  report["experiment"] = experiment->kind();
  report["config"] = echo;
  report["run"] = RunSection(full);
  report["spot_check"] = {{"fraction", kSpotCheckFraction},
                          {"results", spot.results}};
  report["digest"] = ReportDigest(report);
  report["timing"] = {
      {"run_seconds", std::chrono::duration<double>(t1 - t0).count()},
      {"spot_check_seconds", std::chrono::duration<double>(t2 - t1).count()},
      {"workers", WorkerCount()}};

  RunOutcome outcome;
  outcome.report = report;
  outcome.report_path = base + ".json";
  outcome.all_passed = full.AllPassed();
  WriteText(outcome.report_path, report.dump(2) + "\n");
  for (const CsvFile& csv : full.csv) WriteText(base + "." + csv.suffix, csv.content);

  for (const Check& c : full.checks) {
    log << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) log << "  (" << c.detail << ")";
    log << '\n';
  }
  log << "report: " << outcome.report_path << '\n';
  return outcome;
}

RunOutcome RunConfigFile(const std::string& path,
                         const std::optional<std::string>& output, std::ostream& log) {
  return RunConfig(Config::FromFile(path), output, log);
}

VerifyResult VerifyReport(const json& report, std::ostream& log) {
  VerifyResult result;
  for (const char* key : {"format", "library_version", "config", "run", "spot_check",
                          "digest", "experiment"}) {
    if (!report.is_object() || !report.contains(key)) {
      throw Error(ErrorCode::kConfig, std::string("corrupt report: missing '") + key + "'");
    }
  }
  if (report.at("format") != kReportFormat) {
    throw Error(ErrorCode::kConfig, "corrupt report: unknown format");
  }
  if (report.at("library_version") != kLibraryVersion) {
    result.version_mismatch = true;
    log << "warning: report written by library version "
        << report.at("library_version").dump() << ", verifying with " << kLibraryVersion
        << '\n';
  }
  if (ReportDigest(report) != report.at("digest")) {
    result.message = "digest mismatch: report contents were modified";
    return result;
  }
  Config config = Config::FromEcho(report.at("config"));
  config.String("", "output", std::string());
  std::unique_ptr<Experiment> experiment = ParseExperiment(config);
  if (experiment->kind() != report.at("experiment")) {
    result.message = "experiment kind does not match the config echo";
    return result;
  }
  const double fraction = report.at("spot_check").value("fraction", kSpotCheckFraction);
  const ExperimentOutput spot = experiment->Run(fraction);
  std::string where;
  if (!NumericallyEqual(report.at("spot_check").at("results"), spot.results, "results",
                        &where)) {
    result.message = "spot check disagrees at " + where;
    return result;
  }
  result.ok = true;
  result.message = "spot check reproduced";
  return result;
}

VerifyResult VerifyReportFile(const std::string& path, std::ostream& log) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read report '" + path + "'");
  json report;
  try {
    report = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("corrupt report: ") + e.what());
  }
  return VerifyReport(report, log);
}

}  // namespace pcmi
