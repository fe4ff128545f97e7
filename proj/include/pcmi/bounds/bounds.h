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

#ifndef PCMI_BOUNDS_BOUNDS_H_
#define PCMI_BOUNDS_BOUNDS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "pcmi/compress/compressor.h"
#include "pcmi/core/distribution.h"
#include "pcmi/core/sample.h"
#include "pcmi/core/seed.h"
#include "pcmi/core/stats.h"
#include "pcmi/problems/problem.h"

namespace pcmi {

// Monte Carlo budget. `outer` counts draws of (S~, Theta), `inner` counts
// draws of (J, W, W_hat) per outer draw. `population_samples` is used only
// when a population risk has no closed form.
struct McBudget {
  int outer = 100;
  int inner = 10;
  Seed seed = Seed(0);
  int64_t population_samples = 20000;

  void Validate() const;
  // Budget with outer scaled by `fraction` (at least one draw).
  McBudget Scaled(double fraction) const;
};

enum class BoundMode {
  kCompressed,
  kSingleDatum,
  kClosedFormClb,
  kClosedFormRate,
  kClassicCmi,
};
std::string BoundModeName(BoundMode mode);

struct BoundReport {
  static constexpr int kSchemaVersion = 1;

  BoundMode mode = BoundMode::kCompressed;
  int n = 0;
  int d = 0;
  // The information term: the analytic cap, or an exact CMI value.
  double cmi_term = 0.0;
  Estimate delta_ell;
  // Outer average of sqrt(2 delta_ell cmi / n) (or its per-index analogue).
  Estimate rate_term;
  Estimate distortion;
  // Distortion point estimate plus its CI half-width.
  double epsilon = 0.0;
  double total = 0.0;
  // Measured generalization error of the raw and compressed outputs.
  Estimate gen_original;
  Estimate gen_compressed;
  // Single-datum mode: per-index delta_ell averaged over outer draws.
  std::vector<double> per_index_delta_ell;
  McBudget budget;
  std::vector<std::string> notes;

  nlohmann::json ToJson() const;
  static std::string CsvHeader();
  std::string CsvRow() const;
};

// Monte Carlo average over (J, W, W_hat) of
// (1/n) sum_i (l(Z_{i,0}, Theta W_hat) - l(Z_{i,1}, Theta W_hat))^2.
Estimate DeltaEllHat(const Problem& problem, const SuperSample& ss,
                     const Projection& theta, const Learner& learner,
                     const CompressorConfig& config, int inner,
                     const Seed& seed);
// Per-index version: entry i averages (l(Z_{i,0}) - l(Z_{i,1}))^2.
std::vector<double> DeltaEllPerIndex(const Problem& problem,
                                     const SuperSample& ss,
                                     const Projection& theta,
                                     const Learner& learner,
                                     const CompressorConfig& config, int inner,
                                     const Seed& seed);

struct DistortionResult {
  // E[gen(S, W) - gen(S, Theta W_hat)].
  Estimate distortion;
  Estimate gen_original;
  Estimate gen_compressed;
};
DistortionResult DistortionEstimate(const Problem& problem,
                                    const DataDistribution& mu,
                                    const Learner& learner,
                                    const CompressorConfig& config, int n,
                                    const McBudget& budget);

BoundReport CompressedBound(const Problem& problem, const DataDistribution& mu,
                          const Learner& learner,
                          const CompressorConfig& config, int n,
                          const McBudget& budget);
// Per-datum assembly; every per-index CMI is replaced by the global cap.
BoundReport SingleDatumBound(const Problem& problem, const DataDistribution& mu,
                             const Learner& learner,
                             const CompressorConfig& config, int n,
                             const McBudget& budget);

// 8 L R / sqrt(n).
double ClosedFormClb(double lipschitz, double radius, int n);
// Closed-form rate of the (d, c_w, nu) compressor on linear problems.
double ClosedFormRate(const CompressorConfig& config, int n);

struct ClassicCmiBounds {
  double plain = 0.0;  // sqrt(2 cmi / n)
  double clb = 0.0;    // L R sqrt(8 cmi / n)
};
ClassicCmiBounds ClassicCmiBound(double cmi, int n, double lipschitz,
                                 double radius);

// Largest n accepted by the enumeration oracle.
inline constexpr int kMaxOracleN = 14;

struct CmiOracleResult {
  double cmi_nats = 0.0;
  int distinct_outputs = 0;
  int64_t memberships = 0;
  std::string grouping;
};

// Maps a hypothesis to a discrete cell.
using CellQuantizer = std::function<Eigen::VectorXi(const Eigen::VectorXd&)>;

// Exact I(W; J | S~) = H(W | S~) for a deterministic learner under uniform J,
// by enumeration of all 2^n memberships. Outputs are grouped within 1e-9
// Euclidean distance, or by cell identity when a quantizer is given.
CmiOracleResult ExactCmiOracle(const SuperSample& ss, const Learner& learner,
                               const CellQuantizer* quantizer = nullptr);

// Cell quantizer for the compressed output with the dither disabled: the
// clipped projection is rounded to the lattice of spacing 2 nu.
CellQuantizer CompressedCellQuantizer(const Projection& theta,
                                      const CompressorConfig& config);

// Exact CMI of the dithered d = 1 output: the conditional law is an equal
// mixture of uniform intervals [u_J - nu, u_J + nu], so the CMI equals the
// entropy of that mixture minus log(2 nu).
double DitheredMixtureCmi1D(std::span<const double> centers, double nu);
double ExactCompressedCmi1D(const SuperSample& ss, const Learner& learner,
                            const Projection& theta,
                            const CompressorConfig& config);

}  // namespace pcmi

#endif  // PCMI_BOUNDS_BOUNDS_H_
