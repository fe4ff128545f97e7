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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "pcmi/core/distribution.h"
#include "pcmi/core/error.h"
#include "pcmi/core/sample.h"
#include "pcmi/problems/problem.h"
#include "pcmi/sgld/sgld.h"

namespace pcmi {
namespace {

struct Fixture {
  int dim = 32, n = 20;
  Problem problem = Problem::Linear(32, 1.0, 1.0);
  DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(32, 1.0, Seed(1)));
  SuperSample ss = SampleSuperSample(mu, 20, Seed(2));
  MembershipVector j = SampleMembership(20, Seed(3));
  Eigen::MatrixXd theta = SampleStiefel(32, 4, Seed(4));
};

SgldConfig Config(int steps, double eta, double sigma, double nu, uint64_t seed = 5) {
  SgldConfig c = SgldConfig::Constant(4, steps, 5, eta, sigma, nu);
  c.seed = Seed(seed);
  return c;
}

TEST(TrainSubspaceTest, FrozenWithoutStepsOrNoise) {
  Fixture f;
  const Trajectory t = TrainSubspace(Config(10, 0.0, 0.0, 0.0), f.problem, f.ss, f.j, f.theta);
  ASSERT_EQ(t.states.size(), 11u);
  for (const auto& w : t.states) EXPECT_EQ(w, Eigen::VectorXd::Zero(4));
}

TEST(TrainSubspaceTest, LinearStepIsTranslation) {
  Fixture f;
  const SgldConfig c = Config(1, 0.3, 0.0, 0.0);
  const Trajectory t = TrainSubspace(c, f.problem, f.ss, f.j, f.theta);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(4);
  for (int i : t.batches[0]) expected += 0.3 * f.theta.transpose() * f.ss.point(i, f.j[i]) / 5.0;
  EXPECT_LT((t.states[1] - ProjectToBall(expected, 1.0)).norm(), 1e-14);
}

TEST(TrainSubspaceTest, GradientGapsAndProjection) {
  Fixture f;
  const Trajectory t = TrainSubspace(Config(30, 0.5, 0.3, 0.0), f.problem, f.ss, f.j, f.theta);
  for (size_t s = 0; s < t.touches.size(); ++s) {
    int multiplicity = 0;
    for (const Touch& touch : t.touches[s]) {
      const double oracle =
          (f.theta.transpose() * (f.ss.point(touch.index, 0) - f.ss.point(touch.index, 1))).norm();
      EXPECT_NEAR(touch.gap, oracle, 1e-12);
      multiplicity += touch.multiplicity;
    }
    EXPECT_EQ(multiplicity, 5);
  }
  for (const auto& w : t.states) EXPECT_LE(w.norm(), 1.0 + 1e-12);
}

TEST(TrainSubspaceTest, RejectsNonOrthonormalBasis) {
  Fixture f;
  try {
    TrainSubspace(Config(3, 0.1, 0.1, 0.0), f.problem, f.ss, f.j, 2.0 * f.theta);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(PerturbedTest, NoExtraNoiseReproducesReference) {
  Fixture f;
  const SgldConfig c = Config(25, 0.2, 0.1, 0.0);
  const Trajectory ref = TrainSubspace(c, f.problem, f.ss, f.j, f.theta);
  const Trajectory pert = PerturbedTrajectory(c, f.problem, f.ss, f.j, f.theta, ref);
  for (size_t t = 0; t < ref.states.size(); ++t) EXPECT_EQ(ref.states[t], pert.states[t]);
}

TEST(PerturbedTest, CouplingHoldsForContractiveSteps) {
  // Strongly convex loss with eta * lambda = 0.1 contracts by 0.9 per step.
  Fixture f;
  const Problem sc = Problem::StronglyConvex(f.dim, 1.0, 1.0, 1.0);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    SgldConfig c = Config(50, 0.1, 0.0, 0.02, seed);
    c.alpha = 0.9;
    const Trajectory ref = TrainSubspace(c, sc, f.ss, f.j, f.theta);
    const Trajectory pert = PerturbedTrajectory(c, sc, f.ss, f.j, f.theta, ref);
    ASSERT_EQ(pert.coupling_gap.size(), 50u);
    for (size_t t = 0; t < pert.coupling_gap.size(); ++t) {
      EXPECT_LE(pert.coupling_gap[t], pert.coupling_bound[t] * (1 + 1e-9) + 1e-12);
    }
  }
}

TEST(PerturbedTest, FirstStepBound) {
  Fixture f;
  SgldConfig c = Config(1, 0.2, 0.1, 0.05);
  const Trajectory ref = TrainSubspace(c, f.problem, f.ss, f.j, f.theta);
  const Trajectory pert = PerturbedTrajectory(c, f.problem, f.ss, f.j, f.theta, ref);
  // The bound after one step is nu times the norm of the extra draw, so
  // the gap divided by nu is that norm unless projection shrinks it.
  EXPECT_LE(pert.coupling_gap[0], pert.coupling_bound[0] + 1e-15);
  EXPECT_GT(pert.coupling_bound[0], 0.0);
}

TEST(PerturbedTest, MisdeclaredContractionIsDetected) {
  Fixture f;
  const Problem sc = Problem::StronglyConvex(f.dim, 1.0, 1.0, 1.0);
  SgldConfig c = Config(50, 0.1, 0.0, 0.05);
  c.alpha = 0.3;
  const Trajectory ref = TrainSubspace(c, sc, f.ss, f.j, f.theta);
  try {
    PerturbedTrajectory(c, sc, f.ss, f.j, f.theta, ref);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDiagnostic);
  }
}

TEST(ForgettingFactorTest, ReferenceValues) {
  EXPECT_NEAR(ForgettingFactor(1.0, 0.1, 1.0, 10.0), std::erf(0.11 / std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(ForgettingFactor(1.0, 0.1, 1.0, 10.0), 0.0876, 1e-4);
  EXPECT_EQ(ForgettingFactor(1.0, 0.1, 1.0, 0.0), 1.0);
  EXPECT_LT(ForgettingFactor(1.0, 0.1, 1.0, 1e9), 1e-8);
  double previous = 0.0;
  for (double s = 100.0; s > 0.2; s /= 1.5) {
    const double q = ForgettingFactor(1.0, 0.1, 1.0, s);
    EXPECT_GT(q, previous);
    previous = q;
  }
}

TEST(DistortionTermTest, ClosedForm) {
  SgldConfig c = Config(10, 0.1, 0.1, 0.0);
  EXPECT_EQ(LossyDistortionTerm(c), 0.0);
  c.d = 1;
  c.alpha = 0.8;
  c.lipschitz = 2.0;
  c.nu.assign(10, 0.01);
  double weighted = 0.0;
  for (int t = 1; t <= 10; ++t) weighted += 0.01 * std::pow(0.8, 10 - t);
  const double prefactor = 2 * std::sqrt(2.0) / std::sqrt(std::numbers::pi);
  EXPECT_NEAR(prefactor, 1.5958, 1e-4);
  EXPECT_NEAR(LossyDistortionTerm(c), prefactor * 2.0 * weighted, 1e-14);
}

std::vector<Trajectory> Ensemble(const Fixture& f, const SgldConfig& c, int count) {
  std::vector<Trajectory> out;
  for (int r = 0; r < count; ++r) {
    SgldConfig local = c;
    local.seed = Seed(50).Child(r);
    const MembershipVector j = SampleMembership(f.n, Seed(60).Child(r));
    out.push_back(TrainSubspace(local, f.problem, f.ss, j, f.theta));
  }
  return out;
}

TEST(LosslessBoundTest, SgdModeClosedForm) {
  Fixture f;
  const SgldConfig c = Config(40, 0.1, 0.0, 0.0);
  const auto ensemble = Ensemble(f, c, 4);
  const Estimate bound = LosslessBound(ensemble, 2.0, c, f.n);
  double oracle = 0.0;
  for (const Trajectory& t : ensemble) {
    std::vector<int> touched_steps(f.n, 0);
    for (const auto& step : t.touches) {
      for (const Touch& touch : step) touched_steps[touch.index] += touch.gap > 0;
    }
    double sum = 0.0;
    for (int m : touched_steps) sum += std::sqrt(m * std::numbers::ln2);
    oracle += 2.0 * std::sqrt(2.0) / f.n * sum;
  }
  EXPECT_NEAR(bound.mean, oracle / ensemble.size(), 1e-12);
}

TEST(LosslessBoundTest, VanishesForIdenticalColumns) {
  Fixture f;
  const Dataset column = SampleDataset(f.mu, f.n, Seed(9));
  f.ss = SuperSample(column, column);
  const SgldConfig c = Config(20, 0.1, 0.1, 0.0);
  EXPECT_EQ(LosslessBound(Ensemble(f, c, 3), 2.0, c, f.n).mean, 0.0);
}

TEST(LosslessBoundTest, DecreasesWithNoise) {
  Fixture f;
  const SgldConfig base = Config(30, 0.1, 0.05, 0.0);
  const auto ensemble = Ensemble(f, base, 3);
  double previous = std::numeric_limits<double>::infinity();
  for (double sigma : {0.01, 0.03, 0.1, 0.3, 1.0}) {
    SgldConfig c = base;
    c.sigma.assign(c.steps, sigma);
    const double b = LosslessBound(ensemble, 2.0, c, f.n).mean;
    EXPECT_LT(b, previous);
    previous = b;
  }
}

TEST(LossyBoundTest, ReducesToLosslessWithoutPerturbation) {
  Fixture f;
  const SgldConfig c = Config(30, 0.1, 0.05, 0.0);
  const auto ensemble = Ensemble(f, c, 3);
  const SgldBoundReport lossy = LossyBound(ensemble, 2.0, c, f.n, QConvention::kAllPast);
  EXPECT_NEAR(lossy.rate_term.mean, LosslessBound(ensemble, 2.0, c, f.n).mean, 1e-12);
  EXPECT_EQ(lossy.distortion_term, 0.0);
  EXPECT_NEAR(lossy.lossy_total, lossy.rate_term.mean, 1e-15);
  EXPECT_FALSE(lossy.sgd_mode);
  // Forgetting factors only shrink the rate term.
  EXPECT_LE(LossyBound(ensemble, 2.0, c, f.n).rate_term.mean, lossy.rate_term.mean + 1e-15);
}

TEST(SgldExperimentTest, GapDominatedByBounds) {
  Fixture f;
  const SgldConfig c = Config(40, 0.05, 0.05, 1e-4);
  const SgldExperiment e = RunSgldExperiment(c, f.problem, f.mu, f.n, 8, Seed(70));
  EXPECT_EQ(e.replicas, 8);
  EXPECT_LE(e.gen_gap.mean, e.bounds.lossless.mean + 3 * e.gen_gap.std_error());
  EXPECT_LE(e.gen_gap.mean, e.bounds.lossy_total + 3 * e.gen_gap.std_error());
  EXPECT_LE(e.max_coupling_ratio, 1.0 + 1e-9);
  EXPECT_GE(e.bounds.lossless.mean, 0.0);
  EXPECT_GE(e.bounds.lossy_total, 0.0);
}

TEST(SgldExperimentTest, NoLearningMeansNoGap) {
  Fixture f;
  const Estimate gap = MeasureGenGap(Config(10, 0.0, 0.0, 0.0), f.problem, f.mu, f.n, 5, Seed(1));
  EXPECT_EQ(gap.mean, 0.0);
}

TEST(SgldConfigTest, Validation) {
  SgldConfig c = Config(5, 0.1, 0.1, 0.0);
  EXPECT_NO_THROW(c.Validate(10));
  EXPECT_THROW(c.Validate(4), Error);
  c.sigma[2] = -1.0;
  EXPECT_THROW(c.Validate(10), Error);
  c = Config(5, 0.1, 0.1, 0.0);
  c.alpha = 0.0;
  EXPECT_THROW(c.Validate(10), Error);
  c = Config(5, 0.1, 0.0, 0.0);
  EXPECT_TRUE(c.SgdMode());
}

}  // namespace
}  // namespace pcmi
