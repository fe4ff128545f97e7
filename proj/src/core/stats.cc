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

#include "pcmi/core/stats.h"

#include <algorithm>
#include <cmath>

#include "pcmi/core/error.h"

namespace pcmi {

void RunningStats::Add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningStats::Merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count_ + other.count_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.count_) / total;
  m2_ += other.m2_ + delta * delta * static_cast<double>(count_) *
                         static_cast<double>(other.count_) / total;
  count_ += other.count_;
}

double RunningStats::variance() const {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

Estimate RunningStats::ToEstimate() const {
  Estimate e;
  e.mean = mean_;
  e.count = count_;
  e.half_width =
      count_ < 2 ? 0.0 : kZ95 * std::sqrt(variance() / static_cast<double>(count_));
  return e;
}

Estimate EstimateOf(std::span<const double> values) {
  RunningStats stats;
  for (double v : values) stats.Add(v);
  return stats.ToEstimate();
}

double Proportion::std_error() const {
  if (trials == 0) return 0.0;
  return std::sqrt(value * (1.0 - value) / static_cast<double>(trials));
}

Proportion WilsonInterval(int64_t successes, int64_t trials, double z) {
  Require(trials > 0, ErrorCode::kParameter, "Wilson interval needs trials > 0");
  Require(successes >= 0 && successes <= trials, ErrorCode::kParameter,
          "successes must lie in [0, trials]");
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  const double t = static_cast<double>(trials);
  p.value = static_cast<double>(successes) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (p.value + z2 / (2.0 * t)) / denom;
  const double spread =
      z * std::sqrt(p.value * (1.0 - p.value) / t + z2 / (4.0 * t * t)) / denom;
  // The interval touches the boundary exactly at the extreme counts.
  p.lower = successes == 0 ? 0.0 : std::max(0.0, center - spread);
  p.upper = successes == trials ? 1.0 : std::min(1.0, center + spread);
  return p;
}

double LogLogSlope(std::span<const double> x, std::span<const double> y) {
  Require(x.size() == y.size() && x.size() >= 2, ErrorCode::kShape,
          "log-log slope needs two equal-length series of size >= 2");
  double mx = 0, my = 0;
  const double m = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    Require(x[i] > 0 && y[i] > 0, ErrorCode::kParameter,
            "log-log slope needs positive values");
    mx += std::log(x[i]) / m;
    my += std::log(y[i]) / m;
  }
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace pcmi
