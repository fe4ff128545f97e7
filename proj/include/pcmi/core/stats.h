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

#ifndef PCMI_CORE_STATS_H_
#define PCMI_CORE_STATS_H_

#include <cstdint>
#include <span>

namespace pcmi {

// Two-sided 95% normal quantile used for every reported interval.
inline constexpr double kZ95 = 1.959963984540054;

// Sample mean with a normal-approximation 95% half-width.
struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;
  int64_t count = 0;

  double std_error() const { return half_width / kZ95; }
  double lower() const { return mean - half_width; }
  double upper() const { return mean + half_width; }
};

// Welford accumulator.
class RunningStats {
 public:
  void Add(double x);
  void Merge(const RunningStats& other);

  int64_t count() const { return count_; }
  double mean() const { return mean_; }
  // Unbiased sample variance; zero for fewer than two samples.
  double variance() const;
  Estimate ToEstimate() const;

 private:
  int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

Estimate EstimateOf(std::span<const double> values);

// Wilson score interval for a binomial proportion.
struct Proportion {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int64_t successes = 0;
  int64_t trials = 0;

  double std_error() const;
};

Proportion WilsonInterval(int64_t successes, int64_t trials, double z = kZ95);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(std::span<const double> x, std::span<const double> y);

}  // namespace pcmi

#endif  // PCMI_CORE_STATS_H_
