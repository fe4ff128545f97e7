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

#include "pcmi/core/parallel.h"

#include <cstdlib>
#include <string>

namespace pcmi {
namespace {

std::atomic<int> g_override{0};

int EnvironmentWorkers() {
  if (const char* value = std::getenv(kWorkersEnv)) {
    try {
      const int parsed = std::stoi(value);
      if (parsed >= 1) return parsed;
    } catch (const std::exception&) {
      // Fall through to the hardware default.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int WorkerCount() {
  const int forced = g_override.load();
  if (forced > 0) return forced;
  static const int from_env = EnvironmentWorkers();
  return from_env;
}

void SetWorkerCount(int workers) { g_override = workers > 0 ? workers : 0; }

}  // namespace pcmi
