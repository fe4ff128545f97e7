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

#ifndef PCMI_MEMOR_RECALL_GAME_H_
#define PCMI_MEMOR_RECALL_GAME_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcmi/compress/compressor.h"
#include "pcmi/core/distribution.h"
#include "pcmi/core/seed.h"
#include "pcmi/core/stats.h"
#include "pcmi/problems/problem.h"

namespace pcmi {

// Ignores its inputs. With probability alpha (drawn once per trial) it answers
// 0 to every query; otherwise each query is answered 0 with probability r.
struct DummyAdversary {
  double alpha = 0.0;
  double r = 0.0;
};

// Flags z as a member when <model, z> / ||model|| >= tau.
struct CorrelationAdversary {
  double tau = 0.0;
};

using Adversary = std::variant<DummyAdversary, CorrelationAdversary>;

// Validates ranges: alpha, r in [0, 1]. alpha = 1 is the all-zero adversary.
Adversary MakeDummyAdversary(double alpha, double r);
Adversary MakeCorrelationAdversary(double tau);
std::string DescribeAdversary(const Adversary& adversary);
// Correlation adversaries for every threshold in `taus`.
std::vector<Adversary> CorrelationFamily(std::span<const double> taus);
// `count` evenly spaced thresholds on [lo, hi].
std::vector<double> ThresholdGrid(double lo, double hi, int count);

// What the adversary sees: the raw output, or Theta W_hat together with Theta.
struct ModelRelease {
  Learner learner;
  std::optional<CompressorConfig> compressor;
  std::string label;
};

struct TraceReport {
  int n = 0;
  int64_t trials = 0;
  std::string adversary;
  // P(some ghost Z_{i,0} is flagged).
  Proportion soundness;
  // recall_histogram[k] counts trials in which exactly k members were flagged.
  std::vector<int64_t> recall_histogram;
  Estimate recall_mean;

  // P(recall >= m) with a Wilson interval.
  Proportion RecallProbability(int m) const;
  // False when the simulation refutes (m, q, xi)-tracing at the 95% level,
  // i.e. the soundness interval lies above xi or the recall interval below q.
  bool ConsistentWithTracing(int m, double q, double xi) const;

  nlohmann::json ToJson() const;
};

// Plays `trials` independent games. In each trial S~ is drawn, column 1 is
// the training set, and every adversary queries every Z_{i,0} and Z_{i,1}
// independently. All adversaries share the same trials.
std::vector<TraceReport> PlayRecallGame(const ModelRelease& release,
                                        const DataDistribution& mu, int n,
                                        std::span<const Adversary> adversaries,
                                        int64_t trials, const Seed& seed);
TraceReport PlayRecallGame(const ModelRelease& release,
                           const DataDistribution& mu, int n,
                           const Adversary& adversary, int64_t trials,
                           const Seed& seed);

// Exact soundness and P(recall >= m) of a dummy adversary.
struct DummyLaw {
  double soundness = 0.0;
  double recall_probability = 0.0;
  double recall_mean = 0.0;
};
DummyLaw DummyClosedForm(const DummyAdversary& dummy, int n, int m);

enum class FeasibilityRoute {
  kNone,
  kZeroRecall,      // m = 0: the all-zero adversary.
  kSoundnessCover,  // xi >= q.
  kHoeffding,       // Grid search over alpha.
};

struct FeasibilityResult {
  bool feasible = false;
  FeasibilityRoute route = FeasibilityRoute::kNone;
  DummyAdversary witness;
};

// Sufficient condition for a dummy adversary to (m, q, xi)-trace.
FeasibilityResult DummyFeasible(int m, double q, double xi, int n);

// Dummy adversary maximizing min(xi - soundness, P(recall >= m) - q) over a
// grid of (alpha, r), using the exact laws. A negative slack means no dummy on
// the grid traces.
struct DummySearch {
  DummyAdversary best;
  double slack = 0.0;
};
DummySearch BestDummy(int m, double q, double xi, int n, int grid = 400);

// One (release, n, tau) point of a tracing frontier.
struct FrontierPoint {
  std::string release;
  int n = 0;
  int d = 0;
  double tau = 0.0;
  double recall_rate = 0.0;  // E[recall] / n.
  Proportion soundness;
  Proportion half_recall;  // P(recall >= n / 2).
};

// Sweeps correlation thresholds against each release for each n.
std::vector<FrontierPoint> CompressedTracingProbe(
    std::span<const ModelRelease> releases, const DataDistribution& mu,
    std::span<const int> n_grid, std::span<const double> taus, int64_t trials,
    const Seed& seed);

// Points with P(recall >= n/2) > 0 and soundness below that probability by
// more than two combined standard errors.
std::vector<FrontierPoint> DichotomyViolations(
    std::span<const FrontierPoint> points);
// Largest recall rate among points with soundness <= `max_soundness`
// (0 when none qualifies).
double BestRecallAtSoundness(std::span<const FrontierPoint> points,
                             double max_soundness);

void WriteFrontierCsv(std::span<const FrontierPoint> points, std::ostream& out);

}  // namespace pcmi

#endif  // PCMI_MEMOR_RECALL_GAME_H_
