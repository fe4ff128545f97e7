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

#include <gtest/gtest.h>

#include "pcmi/core/distribution.h"
#include "pcmi/core/error.h"
#include "pcmi/core/random.h"
#include "pcmi/core/sample.h"
#include "pcmi/core/stats.h"
#include "pcmi/problems/problem.h"

namespace pcmi {
namespace {

Eigen::VectorXd Basis(int dim, int k) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e[k] = 1.0;
  return e;
}

TEST(LossTest, ClosedFormValues) {
  const Problem linear = Problem::Linear(3, 1.0, 1.0);
  const Eigen::VectorXd z = Basis(3, 1);
  EXPECT_DOUBLE_EQ(linear.Loss(z, z), -1.0);
  const Problem sc = Problem::StronglyConvex(3, 1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(sc.Loss(Eigen::VectorXd::Zero(3), z), 0.0);
  GeneralizedLinearLoss abs_loss = AbsoluteLoss();
  const Problem glm = Problem::GeneralizedLinear(3, abs_loss, 1.0);
  EXPECT_DOUBLE_EQ(glm.Loss(Basis(3, 0), z), 0.0);
  const Problem squared = Problem::Squared(3, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(squared.Loss(Basis(3, 0), z), -4.0);
  EXPECT_THROW(linear.Loss(Eigen::VectorXd::Zero(2), z), Error);
}

TEST(LossTest, GradientMatchesFiniteDifferences) {
  Rng rng(Seed(3));
  const int dim = 5;
  const Problem problems[] = {Problem::Linear(dim, 1.5, 1.0),
                              Problem::StronglyConvex(dim, 1.0, 0.7, 1.0),
                              Problem::Squared(dim, 1.0, 1.0),
                              Problem::GeneralizedLinear(dim, LogisticLoss(), 1.0)};
  for (const Problem& p : problems) {
    Eigen::VectorXd w(dim), z(dim);
    for (int k = 0; k < dim; ++k) {
      w[k] = 0.3 * rng.Normal();
      z[k] = 0.3 * rng.Normal();
    }
    const Eigen::VectorXd g = p.Gradient(w, z);
    for (int k = 0; k < dim; ++k) {
      const double h = 1e-6;
      const double fd = (p.Loss(w + h * Basis(dim, k), z) - p.Loss(w - h * Basis(dim, k), z)) /
                        (2 * h);
      EXPECT_NEAR(g[k], fd, 1e-7) << p.Describe();
    }
  }
}

TEST(RiskTest, EmpiricalRiskIdentities) {
  const Problem linear = Problem::Linear(2, 2.0, 1.0);
  Dataset data(2, 3);
  data << 0.1, 0.5, -0.2, 0.3, 0.0, 0.4;
  Eigen::VectorXd w(2);
  w << 0.6, -0.8;
  const Eigen::VectorXd zbar = data.rowwise().mean();
  EXPECT_NEAR(EmpiricalRisk(linear, data, w), -2.0 * w.dot(zbar), 1e-15);
  EXPECT_DOUBLE_EQ(EmpiricalRisk(linear, data.leftCols(1), w), linear.Loss(w, data.col(0)));
  Dataset doubled(2, 6);
  doubled << data, data;
  EXPECT_NEAR(EmpiricalRisk(linear, doubled, w), EmpiricalRisk(linear, data, w), 1e-15);
  EXPECT_THROW(EmpiricalRisk(linear, Dataset(2, 0), w), Error);
}

TEST(RiskTest, PopulationRiskOnCube) {
  const int dim = 16;
  const Problem linear = Problem::Linear(dim, 1.0, 1.0);
  const DataDistribution centered = DataDistribution::Cube(Eigen::VectorXd::Zero(dim));
  EXPECT_DOUBLE_EQ(PopulationRisk(linear, centered, Basis(dim, 2)).value, 0.0);
  const DataDistribution ones = DataDistribution::Cube(Eigen::VectorXd::Ones(dim));
  const Eigen::VectorXd w = ones.Mean().normalized();
  const RiskValue r = PopulationRisk(linear, ones, w);
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.value, -1.0, 1e-12);
}

TEST(RiskTest, SquaredPopulationRiskMatchesMonteCarlo) {
  const int dim = 6;
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 0.8, Seed(2)));
  const Problem squared = Problem::Squared(dim, 1.0, 1.0);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(dim, 0.3);
  const RiskValue exact = PopulationRisk(squared, mu, w);
  Rng rng(Seed(5));
  RunningStats stats;
  for (int i = 0; i < 200000; ++i) stats.Add(squared.Loss(w, mu.Sample(rng)));
  const Estimate mc = stats.ToEstimate();
  EXPECT_NEAR(exact.value, mc.mean, 3 * mc.std_error());
}

TEST(RiskTest, GeneralizedLinearPopulationRiskIsMonteCarlo) {
  const int dim = 4;
  const Problem glm = Problem::GeneralizedLinear(dim, LogisticLoss(), 1.0);
  const DataDistribution mu = DataDistribution::Sphere(dim);
  const RiskValue r = PopulationRisk(glm, mu, Basis(dim, 0) * 0.5, {50000, Seed(3)});
  EXPECT_FALSE(r.exact);
  EXPECT_GT(r.half_width, 0.0);
  EXPECT_EQ(r.samples, 50000);
  ASSERT_TRUE(r.seed.has_value());
  // Symmetric data: E log(1 + e^{-t}) with t = <w, z> symmetric equals
  // E[log(1 + e^t) + log(1 + e^{-t})] / 2 >= log 2.
  EXPECT_NEAR(r.value, std::log(2.0), 0.02);
}

TEST(GenErrorTest, LinearIdentityAndStronglyConvexEquality) {
  const int dim = 8;
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 1.0, Seed(9)));
  const Dataset data = SampleDataset(mu, 12, Seed(10));
  const Problem linear = Problem::Linear(dim, 1.3, 1.0);
  const Problem sc = Problem::StronglyConvex(dim, 1.3, 0.5, 1.0);
  Rng rng(Seed(11));
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd w(dim);
    for (int k = 0; k < dim; ++k) w[k] = rng.Normal();
    w = ProjectToBall(w, rng.Uniform());
    const double direct = -1.3 * w.dot(mu.Mean() - data.rowwise().mean());
    const double gen = GenError(linear, mu, data, w).value;
    EXPECT_NEAR(gen, direct, 1e-12);
    EXPECT_NEAR(GenError(sc, mu, data, w).value, gen, 1e-12);
  }
  EXPECT_DOUBLE_EQ(GenError(linear, mu, data, Eigen::VectorXd::Zero(dim)).value, 0.0);
}

TEST(GenErrorTest, FullSupportDatasetHasZeroGap) {
  Eigen::VectorXd a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  const DataDistribution mu = DataDistribution::FiniteSupport({a, b}, {0.5, 0.5});
  Dataset data(2, 2);
  data << a, b;
  const Eigen::VectorXd w = Eigen::Vector2d(0.3, -0.4);
  EXPECT_NEAR(GenError(Problem::Linear(2, 1.0, 1.0), mu, data, w).value, 0.0, 1e-15);
  EXPECT_NEAR(GenError(Problem::Squared(2, 1.0, 1.0), mu, data, w).value, 0.0, 1e-15);
}

TEST(ErmTest, ClosedFormSolutions) {
  const Problem linear = Problem::Linear(3, 1.0, 1.0);
  Dataset one(3, 1);
  one.col(0) = Basis(3, 0);
  EXPECT_EQ(ErmLinear(linear, one), Basis(3, 0));
  Dataset opposite(3, 2);
  opposite << Basis(3, 0), -Basis(3, 0);
  EXPECT_EQ(ErmLinear(linear, opposite), Eigen::VectorXd::Zero(3));
  EXPECT_THROW(ErmLinear(Problem::Squared(3, 1.0, 1.0), one), Error);
  const Problem sc = Problem::StronglyConvex(3, 1.0, 4.0, 1.0);
  EXPECT_TRUE(ErmLinear(sc, one).isApprox(Basis(3, 0) * 0.25));
}

TEST(ErmTest, BeatsRandomProbesAndAttainsOptimum) {
  const int dim = 10;
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 1.0, Seed(1)));
  const Problem linear = Problem::Linear(dim, 2.0, 1.5);
  Rng rng(Seed(4));
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = SampleDataset(mu, 7, Seed(100 + trial));
    const Eigen::VectorXd w = ErmLinear(linear, data);
    const double best = EmpiricalRisk(linear, data, w);
    EXPECT_NEAR(best, -2.0 * data.rowwise().mean().norm() * 1.5, 1e-12);
    EXPECT_LE(w.norm(), 1.5 + 1e-12);
    for (int probe = 0; probe < 64; ++probe) {
      Eigen::VectorXd v(dim);
      for (int k = 0; k < dim; ++k) v[k] = rng.Normal();
      v = ProjectToBall(v, 1.5 * rng.Uniform());
      EXPECT_LE(best, EmpiricalRisk(linear, data, v) + 1e-12);
    }
  }
}

TEST(GradientDescentTest, ConvergesToStronglyConvexErm) {
  const int dim = 5;
  const DataDistribution mu = DataDistribution::Sphere(dim);
  const Dataset data = SampleDataset(mu, 9, Seed(7));
  const Problem sc = Problem::StronglyConvex(dim, 1.0, 2.0, 1.0);
  const Eigen::VectorXd gd = ProjectedGradientDescent(sc, data, {200, 0.2});
  EXPECT_LT((gd - ErmLinear(sc, data)).norm(), 1e-8);
  const Learner learner = GradientDescentLearner(sc, {200, 0.2});
  EXPECT_EQ(learner(data), gd);
}

TEST(LipschitzAuditTest, CertifiedLinksPassAndFalseClaimsFail) {
  const DataDistribution mu = DataDistribution::Sphere(6);
  const Problem logistic = Problem::GeneralizedLinear(6, LogisticLoss(), 1.0);
  EXPECT_LE(AuditLipschitz(logistic, mu, 500, Seed(1)), 1.0);
  GeneralizedLinearLoss steep = AbsoluteLoss();
  steep.link = [](double t, const Eigen::VectorXd&) { return 3.0 * std::abs(t); };
  const Problem lying = Problem::GeneralizedLinear(6, steep, 1.0);
  EXPECT_THROW(AuditLipschitz(lying, mu, 500, Seed(1)), Error);
  EXPECT_THROW(AuditLipschitz(Problem::Linear(6, 1.0, 1.0), mu, 10, Seed(1)), Error);
}

TEST(LossRangeTest, LinearLossStaysInRange) {
  const Problem linear = Problem::Linear(4, 2.0, 0.5);
  const auto range = linear.LossRange();
  ASSERT_TRUE(range.has_value());
  EXPECT_DOUBLE_EQ(range->first, -1.0);
  EXPECT_DOUBLE_EQ(range->second, 1.0);
  const DataDistribution mu = DataDistribution::Sphere(4);
  Rng rng(Seed(2));
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd w(4);
    for (int k = 0; k < 4; ++k) w[k] = rng.Normal();
    w = ProjectToBall(w, 0.5);
    const double l = linear.Loss(w, mu.Sample(rng));
    EXPECT_GE(l, range->first - 1e-12);
    EXPECT_LE(l, range->second + 1e-12);
  }
}

}  // namespace
}  // namespace pcmi
