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

// Command-line entry point: run experiment configs and verify reports.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcmi/cli/experiments.h"
#include "pcmi/cli/runner.h"
#include "pcmi/core/error.h"
#include "pcmi/core/parallel.h"

int main(int argc, char** argv) {
  CLI::App app{"pcmi: compressed-CMI generalization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  int workers = 0;
  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("-o,--output", output,
                  "output prefix; writes <prefix>.json and CSV sidecars");
  run->add_option("-w,--workers", workers,
                  std::string("worker threads (default: $") + pcmi::kWorkersEnv +
                      " or hardware concurrency)");

  std::string report_path;
  CLI::App* verify = app.add_subcommand("verify", "re-run a report's spot check");
  verify->add_option("report", report_path, "report JSON file")->required();
  verify->add_option("-w,--workers", workers, "worker threads");

  CLI::App* list = app.add_subcommand("list-experiments", "list experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? pcmi::kExitOk : pcmi::kExitConfig;
  }

  try {
    if (workers > 0) pcmi::SetWorkerCount(workers);
    if (*list) {
      for (const auto& [kind, description] : pcmi::ListExperiments()) {
        std::cout << kind << "\t" << description << '\n';
      }
      return pcmi::kExitOk;
    }
    if (*run) {
      const pcmi::RunOutcome outcome = pcmi::RunConfigFile(
          config_path, output.empty() ? std::nullopt : std::optional(output), std::cout);
      std::cout << (outcome.all_passed ? "all checks passed" : "some checks failed")
                << '\n';
      return outcome.all_passed ? pcmi::kExitOk : pcmi::kExitAcceptance;
    }
    const pcmi::VerifyResult result = pcmi::VerifyReportFile(report_path, std::cerr);
    std::cout << (result.ok ? "verified: " : "NOT verified: ") << result.message << '\n';
    return result.ok ? pcmi::kExitOk : pcmi::kExitAcceptance;
  } catch (const pcmi::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pcmi::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pcmi::kExitConfig;
  }
}
