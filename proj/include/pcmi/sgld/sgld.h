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

#ifndef PCMI_SGLD_SGLD_H_
#define PCMI_SGLD_SGLD_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "pcmi/core/distribution.h"
#include "pcmi/core/sample.h"
#include "pcmi/core/seed.h"
#include "pcmi/core/stats.h"
#include "pcmi/problems/problem.h"

namespace pcmi {

// Projected noisy minibatch gradient descent in a frozen d-dimensional
// subspace. Schedules have one entry per step t = 1..T.
struct SgldConfig {
  int d = 8;
  int steps = 200;
  int batch = 10;
  std::vector<double> eta;
  std::vector<double> sigma;
  std::vector<double> nu;
  double radius = 1.0;
  // Declared contraction constant of one noiseless projected step.
  double alpha = 1.0;
  // Lipschitz constant of w' -> l(Theta w', z).
  double lipschitz = 1.0;
  Seed seed = Seed(0);

  // Convenience constructor with constant schedules.
  static SgldConfig Constant(int d, int steps, int batch, double eta,
                             double sigma, double nu);
  // Throws Error(kParameter) on invalid fields; `n` bounds the batch size.
  void Validate(int n) const;
  bool SgdMode() const;
};

// One batch member touched at step t: the training index, how often it was
// drawn into the batch, and its gradient gap
// ||grad l(Theta w', Z_{i,0}) - grad l(Theta w', Z_{i,1})|| in w'-space.
struct Touch {
  int index = 0;
  int multiplicity = 0;
  double gap = 0.0;
};

struct Trajectory {
  // states[t] is W'_t for t = 0..T.
  std::vector<Eigen::VectorXd> states;
  // batches[t - 1] lists V_t (with repetitions).
  std::vector<std::vector<int>> batches;
  // touches[t - 1] lists the distinct indices in V_t.
  std::vector<std::vector<Touch>> touches;
  // Perturbed runs only: ||W_hat_t - W'_t|| and its coupling bound.
  std::vector<double> coupling_gap;
  std::vector<double> coupling_bound;
  Seed seed = Seed(0);
};

// Trains from W'_0 = 0. Batches come from seed.Child(0) and the Gaussian noise
// from seed.Child(1). Throws Error(kPrecondition) unless Theta^T Theta = I.
Trajectory TrainSubspace(const SgldConfig& config, const Problem& problem,
                         const SuperSample& ss, const MembershipVector& j,
                         const Eigen::MatrixXd& theta);
// The auxiliary run that shares batches and noise with `reference` and adds
// nu_t eps'_t (eps' from seed.Child(2)). Checks the coupling inequality at
// every step and throws Error(kDiagnostic) if it fails.
Trajectory PerturbedTrajectory(const SgldConfig& config, const Problem& problem,
                               const SuperSample& ss, const MembershipVector& j,
                               const Eigen::MatrixXd& theta,
                               const Trajectory& reference);

// q = 1 - 2 Phi((R + eta L) / sigma_hat) with Phi the standard normal upper
// tail; q = 1 when sigma_hat = 0.
double ForgettingFactor(double radius, double eta, double lipschitz,
                        double sigma_hat);

enum class QConvention {
  kImmediatePast,  // q_r as given by ForgettingFactor.
  kAllPast,        // q_r = 1.
};
std::string QConventionName(QConvention convention);

// sum_i sqrt(sum_{t: i in V_t} f(eta_t k Delta / (b sigma_t), 1/2)) for one
// trajectory, with f at its separated limit when sigma_t = 0.
double LosslessSum(const Trajectory& trajectory, const SgldConfig& config);

struct SgldBoundReport {
  Estimate lossless;
  Estimate rate_term;
  double distortion_term = 0.0;
  // rate_term.mean + distortion_term.
  double lossy_total = 0.0;
  bool sgd_mode = false;
  QConvention q_convention = QConvention::kImmediatePast;
  double loss_range = 0.0;

  nlohmann::json ToJson() const;
};

// (C sqrt(2) / n) E[sum_i sqrt(...)], averaged over the ensemble.
Estimate LosslessBound(std::span<const Trajectory> ensemble, double loss_range,
                       const SgldConfig& config, int n);
// Rate term over perturbed trajectories with sigma_hat_t = sqrt(sigma^2 +
// nu^2) and forgetting factors, plus the distortion term
// 2 sqrt(2) L Gamma((d+1)/2) / Gamma(d/2) sum_t nu_t alpha^(T-t).
SgldBoundReport LossyBound(std::span<const Trajectory> perturbed,
                           double loss_range, const SgldConfig& config, int n,
                           QConvention convention = QConvention::kImmediatePast);
double LossyDistortionTerm(const SgldConfig& config);

struct SgldExperiment {
  Estimate gen_gap;
  SgldBoundReport bounds;
  // Largest ratio of coupling gap to its bound over all steps and replicas.
  double max_coupling_ratio = 0.0;
  int replicas = 0;
};

// Runs `replicas` independent (S~, J, Theta, noise) draws and evaluates the
// measured gap of Theta W'_T together with both bounds.
SgldExperiment RunSgldExperiment(const SgldConfig& config,
                                 const Problem& problem,
                                 const DataDistribution& mu, int n,
                                 int replicas, const Seed& seed,
                                 QConvention convention = QConvention::kImmediatePast);
// Measured gap only.
Estimate MeasureGenGap(const SgldConfig& config, const Problem& problem,
                       const DataDistribution& mu, int n, int replicas,
                       const Seed& seed);

}  // namespace pcmi

#endif  // PCMI_SGLD_SGLD_H_
