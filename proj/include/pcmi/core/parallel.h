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

#ifndef PCMI_CORE_PARALLEL_H_
#define PCMI_CORE_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace pcmi {

// Name of the environment variable that sets the worker count.
inline constexpr char kWorkersEnv[] = "PCMI_WORKERS";

// Number of workers used by ParallelMap. Reads PCMI_WORKERS on first use and
// falls back to the hardware concurrency.
int WorkerCount();
// Overrides the worker count for the rest of the process (0 restores the
// environment default).
void SetWorkerCount(int workers);

// Evaluates fn(i) for i in [0, count) and returns the results in index order.
// Each call must depend only on its index (and on read-only shared state), so
// the output is identical for any worker count. The first exception thrown by
// any call is rethrown after all workers finish.
template <typename Fn>
auto ParallelMap(int count, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, int>> {
  using Result = std::invoke_result_t<Fn&, int>;
  std::vector<Result> results(count > 0 ? count : 0);
  const int workers = std::min(WorkerCount(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    for (int i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace pcmi

#endif  // PCMI_CORE_PARALLEL_H_
