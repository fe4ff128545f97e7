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

#ifndef PCMI_CLI_EXPERIMENTS_H_
#define PCMI_CLI_EXPERIMENTS_H_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcmi/cli/config.h"

namespace pcmi {

// A named pass/fail assertion produced by an experiment.
struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

// A CSV sidecar: file-name suffix and full contents.
struct CsvFile {
  std::string suffix;
  std::string content;
};

struct ExperimentOutput {
  nlohmann::json results;
  std::vector<Check> checks;
  std::vector<CsvFile> csv;

  bool AllPassed() const;
};

class Experiment {
 public:
  virtual ~Experiment() = default;
  virtual std::string kind() const = 0;
  // Runs with every Monte Carlo replica count scaled by `fraction`.
  virtual ExperimentOutput Run(double fraction) const = 0;
};

// Reads and validates every key of the experiment named by `experiment`,
// then rejects unknown keys. No computation happens here.
std::unique_ptr<Experiment> ParseExperiment(Config& config);

// (kind, one-line description) for every experiment kind.
std::vector<std::pair<std::string, std::string>> ListExperiments();

// Formats a double with 17 significant digits.
// Shortest decimal text that round-trips to `value`.
std::string FormatDouble(double value);

}  // namespace pcmi

#endif  // PCMI_CLI_EXPERIMENTS_H_
