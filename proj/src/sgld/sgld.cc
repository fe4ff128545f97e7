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

#include "pcmi/sgld/sgld.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "pcmi/core/error.h"
#include "pcmi/core/parallel.h"
#include "pcmi/mixent/mixture_entropy.h"

namespace pcmi {
namespace {

constexpr double kOrthonormalTolerance = 1e-8;
constexpr double kCouplingSlack = 1e-9;

void CheckSchedule(const std::vector<double>& values, int steps,
                   const char* name, bool strictly_positive) {
  Require(static_cast<int>(values.size()) == steps, ErrorCode::kShape,
          std::string(name) + " schedule must have T entries");
  for (double v : values) {
    Require(std::isfinite(v) && (strictly_positive ? v > 0.0 : v >= 0.0),
            ErrorCode::kParameter,
            std::string(name) + (strictly_positive ? " must be positive"
                                                   : " must be nonnegative"));
  }
}

void CheckTheta(const SgldConfig& config, const Problem& problem,
                const Eigen::MatrixXd& theta) {
  Require(theta.rows() == problem.dim() && theta.cols() == config.d,
          ErrorCode::kShape, "Theta must be D x d");
  const Eigen::MatrixXd gram = theta.transpose() * theta;
  const double error =
      (gram - Eigen::MatrixXd::Identity(config.d, config.d)).cwiseAbs().maxCoeff();
  Require(error <= kOrthonormalTolerance, ErrorCode::kPrecondition,
          "subspace training needs Theta with orthonormal columns");
}

// Gradient of w' -> l(Theta w', z).
Eigen::VectorXd SubspaceGradient(const Problem& problem,
                                 const Eigen::MatrixXd& theta,
                                 const Eigen::VectorXd& w_full,
                                 const Eigen::Ref<const Eigen::VectorXd>& z) {
  return theta.transpose() * problem.Gradient(w_full, z);
}

// Shared engine for the reference and perturbed runs. When `reference` is
// non-null the batches are taken from it and nu_t eps'_t is added.
Trajectory Run(const SgldConfig& config, const Problem& problem,
               const SuperSample& ss, const MembershipVector& j,
               const Eigen::MatrixXd& theta, const Trajectory* reference) {
  const int n = ss.n();
  config.Validate(n);
  CheckTheta(config, problem, theta);
  Require(static_cast<int>(j.size()) == n, ErrorCode::kShape,
          "membership vector length must equal n");
  const bool perturbed = reference != nullptr;
  if (perturbed) {
    Require(reference->seed == config.seed &&
                static_cast<int>(reference->batches.size()) == config.steps,
            ErrorCode::kUsage,
            "perturbed run needs the reference trajectory of the same config");
  }
  Rng batch_rng(config.seed.Child(0));
  Rng noise_rng(config.seed.Child(1));
  Rng extra_rng(config.seed.Child(2));

  Trajectory traj;
  traj.seed = config.seed;
  traj.states.reserve(config.steps + 1);
  traj.states.push_back(Eigen::VectorXd::Zero(config.d));
  traj.batches.reserve(config.steps);
  traj.touches.reserve(config.steps);
  double coupling_bound = 0.0;
  std::vector<int> multiplicity(n, 0);
  Eigen::VectorXd eps(config.d), eps_extra(config.d);

  for (int t = 0; t < config.steps; ++t) {
    std::vector<int> batch(config.batch);
    if (perturbed) {
      batch = reference->batches[t];
    } else {
      for (int k = 0; k < config.batch; ++k) batch[k] = batch_rng.UniformIndex(n);
    }
    const Eigen::VectorXd& w = traj.states.back();
    const Eigen::VectorXd w_full = theta * w;

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(config.d);
    for (int i : batch) {
      grad += SubspaceGradient(problem, theta, w_full, ss.point(i, j[i]));
      ++multiplicity[i];
    }
    grad /= config.batch;

    std::vector<Touch> touches;
    for (int i : batch) {
      if (multiplicity[i] == 0) continue;
      Touch touch;
      touch.index = i;
      touch.multiplicity = multiplicity[i];
      touch.gap = (SubspaceGradient(problem, theta, w_full, ss.point(i, 0)) -
                   SubspaceGradient(problem, theta, w_full, ss.point(i, 1)))
                      .norm();
      touches.push_back(touch);
      multiplicity[i] = 0;
    }

    for (int k = 0; k < config.d; ++k) eps[k] = noise_rng.Normal();
    Eigen::VectorXd next = w - config.eta[t] * grad + config.sigma[t] * eps;
    if (perturbed) {
      for (int k = 0; k < config.d; ++k) eps_extra[k] = extra_rng.Normal();
      next += config.nu[t] * eps_extra;
    }
    traj.states.push_back(ProjectToBall(next, config.radius));
    traj.batches.push_back(std::move(batch));
    traj.touches.push_back(std::move(touches));

    if (perturbed) {
      coupling_bound = config.alpha * coupling_bound + config.nu[t] * eps_extra.norm();
      const double gap = (traj.states.back() - reference->states[t + 1]).norm();
      traj.coupling_gap.push_back(gap);
      traj.coupling_bound.push_back(coupling_bound);
      if (gap > coupling_bound * (1.0 + kCouplingSlack) + 1e-12) {
        throw Error(ErrorCode::kDiagnostic,
                    "coupling inequality violated at step " + std::to_string(t + 1) +
                        " (gap " + std::to_string(gap) + " > bound " +
                        std::to_string(coupling_bound) +
                        "); the declared contraction constant is too small");
      }
    }
  }
  return traj;
}

// Memoized f(a, 1/2); gaps repeat across steps for losses with
// w-independent gradient differences.
class HalfMixtureInfo {
 public:
  double operator()(double a) {
    if (a == 0.0) return 0.0;
    if (std::isinf(a)) return MixtureMutualInformation(MixtureParams::Separated(0.5));
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    const double value = MixtureMutualInformation({a, 0.5});
    cache_.emplace(a, value);
    return value;
  }

 private:
  std::map<double, double> cache_;
};

double Separation(double eta, int multiplicity, double gap, int batch,
                  double sigma) {
  const double shift = eta * multiplicity * gap;
  if (shift == 0.0) return 0.0;
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  return shift / (batch * sigma);
}

int CountTrainingIndices(const Trajectory& trajectory) {
  int n = 0;
  for (const auto& step : trajectory.touches) {
    for (const Touch& touch : step) n = std::max(n, touch.index + 1);
  }
  return n;
}

double RateSum(const Trajectory& trajectory, const SgldConfig& config,
               QConvention convention, bool perturbed, HalfMixtureInfo& f) {
  const int steps = config.steps;
  const int n = CountTrainingIndices(trajectory);
  std::vector<double> forget(n, 1.0);
  std::vector<double> sums(n, 0.0);
  std::vector<uint8_t> touched(n, 0);
  for (int t = steps - 1; t >= 0; --t) {
    const double sigma = perturbed ? std::hypot(config.sigma[t], config.nu[t])
                                   : config.sigma[t];
    for (const Touch& touch : trajectory.touches[t]) {
      const double a = Separation(config.eta[t], touch.multiplicity, touch.gap,
                                  config.batch, sigma);
      sums[touch.index] += forget[touch.index] * f(a);
      touched[touch.index] = 1;
    }
    if (perturbed && convention == QConvention::kImmediatePast) {
      const double q = ForgettingFactor(config.radius, config.eta[t],
                                        config.lipschitz, sigma);
      for (int i = 0; i < n; ++i) {
        if (!touched[i]) forget[i] *= q;
      }
    }
    for (const Touch& touch : trajectory.touches[t]) touched[touch.index] = 0;
  }
  double total = 0.0;
  for (double s : sums) total += std::sqrt(s);
  return total;
}

double LossRangeOf(const Problem& problem) {
  const auto range = problem.LossRange();
  Require(range.has_value(), ErrorCode::kUnsupported,
          "SGLD bounds need a bounded loss with known range");
  return range->second - range->first;
}

}  // namespace

SgldConfig SgldConfig::Constant(int d, int steps, int batch, double eta,
                                double sigma, double nu) {
  SgldConfig c;
  c.d = d;
  c.steps = steps;
  c.batch = batch;
  c.eta.assign(steps, eta);
  c.sigma.assign(steps, sigma);
  c.nu.assign(steps, nu);
  return c;
}

void SgldConfig::Validate(int n) const {
  Require(d >= 1, ErrorCode::kParameter, "d must be >= 1");
  Require(steps >= 1, ErrorCode::kParameter, "T must be >= 1");
  Require(batch >= 1 && batch <= n, ErrorCode::kParameter,
          "batch size must lie in [1, n]");
  CheckSchedule(eta, steps, "eta", false);
  CheckSchedule(sigma, steps, "sigma", false);
  CheckSchedule(nu, steps, "nu", false);
  Require(radius > 0.0, ErrorCode::kParameter, "projection radius must be > 0");
  Require(alpha > 0.0, ErrorCode::kParameter, "contraction constant must be > 0");
  Require(lipschitz > 0.0, ErrorCode::kParameter, "Lipschitz constant must be > 0");
}

bool SgldConfig::SgdMode() const {
  for (double s : sigma) {
    if (s == 0.0) return true;
  }
  return false;
}

Trajectory TrainSubspace(const SgldConfig& config, const Problem& problem,
                         const SuperSample& ss, const MembershipVector& j,
                         const Eigen::MatrixXd& theta) {
  return Run(config, problem, ss, j, theta, nullptr);
}

Trajectory PerturbedTrajectory(const SgldConfig& config, const Problem& problem,
                               const SuperSample& ss, const MembershipVector& j,
                               const Eigen::MatrixXd& theta,
                               const Trajectory& reference) {
  return Run(config, problem, ss, j, theta, &reference);
}

double ForgettingFactor(double radius, double eta, double lipschitz,
                        double sigma_hat) {
  Require(sigma_hat >= 0.0, ErrorCode::kParameter, "sigma_hat must be >= 0");
  if (sigma_hat == 0.0) return 1.0;
  const double x = (radius + eta * lipschitz) / sigma_hat;
  const double upper_tail = 0.5 * std::erfc(x / std::sqrt(2.0));
  return 1.0 - 2.0 * upper_tail;
}

std::string QConventionName(QConvention convention) {
  return convention == QConvention::kAllPast ? "all_past" : "immediate_past";
}

double LosslessSum(const Trajectory& trajectory, const SgldConfig& config) {
  HalfMixtureInfo f;
  return RateSum(trajectory, config, QConvention::kAllPast, false, f);
}

Estimate LosslessBound(std::span<const Trajectory> ensemble, double loss_range,
                       const SgldConfig& config, int n) {
  Require(!ensemble.empty(), ErrorCode::kParameter, "empty trajectory ensemble");
  Require(loss_range >= 0.0 && n >= 1, ErrorCode::kParameter,
          "need C >= 0 and n >= 1");
  HalfMixtureInfo f;
  RunningStats stats;
  const double scale = loss_range * std::sqrt(2.0) / n;
  for (const Trajectory& traj : ensemble) {
    stats.Add(scale * RateSum(traj, config, QConvention::kAllPast, false, f));
  }
  return stats.ToEstimate();
}

double LossyDistortionTerm(const SgldConfig& config) {
  Require(config.alpha > 0.0, ErrorCode::kParameter,
          "contraction constant must be > 0");
  double weighted = 0.0;
  for (int t = 0; t < config.steps; ++t) {
    weighted += config.nu[t] * std::pow(config.alpha, config.steps - 1 - t);
  }
  const double gamma_ratio =
      std::exp(std::lgamma((config.d + 1.0) / 2.0) - std::lgamma(config.d / 2.0));
  return 2.0 * std::sqrt(2.0) * config.lipschitz * gamma_ratio * weighted;
}

SgldBoundReport LossyBound(std::span<const Trajectory> perturbed,
                           double loss_range, const SgldConfig& config, int n,
                           QConvention convention) {
  Require(!perturbed.empty(), ErrorCode::kParameter, "empty trajectory ensemble");
  Require(loss_range >= 0.0 && n >= 1, ErrorCode::kParameter,
          "need C >= 0 and n >= 1");
  SgldBoundReport report;
  report.q_convention = convention;
  report.loss_range = loss_range;
  report.sgd_mode = config.SgdMode();
  HalfMixtureInfo f;
  RunningStats stats;
  const double scale = loss_range * std::sqrt(2.0) / n;
  for (const Trajectory& traj : perturbed) {
    stats.Add(scale * RateSum(traj, config, convention, true, f));
  }
  report.rate_term = stats.ToEstimate();
  report.distortion_term = LossyDistortionTerm(config);
  report.lossy_total = report.rate_term.mean + report.distortion_term;
  return report;
}

nlohmann::json SgldBoundReport::ToJson() const {
  return {{"lossless", {{"mean", lossless.mean}, {"half_width", lossless.half_width}}},
          {"rate_term", {{"mean", rate_term.mean}, {"half_width", rate_term.half_width}}},
          {"distortion_term", distortion_term},
          {"lossy_total", lossy_total},
          {"sgd_mode", sgd_mode},
          {"q_convention", QConventionName(q_convention)},
          {"loss_range", loss_range}};
}

SgldExperiment RunSgldExperiment(const SgldConfig& config,
                                 const Problem& problem,
                                 const DataDistribution& mu, int n,
                                 int replicas, const Seed& seed,
                                 QConvention convention) {
  Require(replicas >= 1, ErrorCode::kParameter, "need at least one replica");
  config.Validate(n);
  Require(config.radius <= problem.radius(), ErrorCode::kParameter,
          "subspace radius must not exceed the problem radius");
  const double loss_range = LossRangeOf(problem);
  struct Replica {
    double gen;
    Trajectory reference;
    Trajectory perturbed;
    double coupling_ratio;
  };
  std::vector<Replica> runs = ParallelMap(replicas, [&](int r) {
    const Seed base = seed.Child(r);
    const SuperSample ss = SampleSuperSample(mu, n, base.Child(0));
    const MembershipVector j = SampleMembership(n, base.Child(1));
    const Eigen::MatrixXd theta = SampleStiefel(problem.dim(), config.d, base.Child(2));
    SgldConfig local = config;
    local.seed = base.Child(3);
    Replica out;
    out.reference = TrainSubspace(local, problem, ss, j, theta);
    out.perturbed = PerturbedTrajectory(local, problem, ss, j, theta, out.reference);
    const Eigen::VectorXd w = theta * out.reference.states.back();
    out.gen = GenError(problem, mu, SelectTrain(ss, j), w).value;
    out.coupling_ratio = 0.0;
    for (size_t t = 0; t < out.perturbed.coupling_gap.size(); ++t) {
      const double bound = out.perturbed.coupling_bound[t];
      const double gap = out.perturbed.coupling_gap[t];
      if (bound > 0.0) {
        out.coupling_ratio = std::max(out.coupling_ratio, gap / bound);
      }
    }
    return out;
  });
  std::vector<Trajectory> reference, perturbed;
  RunningStats gen;
  SgldExperiment result;
  for (Replica& r : runs) {
    gen.Add(r.gen);
    result.max_coupling_ratio = std::max(result.max_coupling_ratio, r.coupling_ratio);
    reference.push_back(std::move(r.reference));
    perturbed.push_back(std::move(r.perturbed));
  }
  result.replicas = replicas;
  result.gen_gap = gen.ToEstimate();
  result.bounds = LossyBound(perturbed, loss_range, config, n, convention);
  result.bounds.lossless = LosslessBound(reference, loss_range, config, n);
  return result;
}

Estimate MeasureGenGap(const SgldConfig& config, const Problem& problem,
                       const DataDistribution& mu, int n, int replicas,
                       const Seed& seed) {
  Require(replicas >= 1, ErrorCode::kParameter, "need at least one replica");
  config.Validate(n);
  const std::vector<double> gaps = ParallelMap(replicas, [&](int r) {
    const Seed base = seed.Child(r);
    const SuperSample ss = SampleSuperSample(mu, n, base.Child(0));
    const MembershipVector j = SampleMembership(n, base.Child(1));
    const Eigen::MatrixXd theta = SampleStiefel(problem.dim(), config.d, base.Child(2));
    SgldConfig local = config;
    local.seed = base.Child(3);
    const Trajectory traj = TrainSubspace(local, problem, ss, j, theta);
    return GenError(problem, mu, SelectTrain(ss, j), theta * traj.states.back()).value;
  });
  return EstimateOf(gaps);
}

}  // namespace pcmi
