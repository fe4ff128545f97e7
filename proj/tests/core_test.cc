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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pcmi/core/distribution.h"
#include "pcmi/core/error.h"
#include "pcmi/core/parallel.h"
#include "pcmi/core/random.h"
#include "pcmi/core/sample.h"
#include "pcmi/core/seed.h"
#include "pcmi/core/stats.h"

namespace pcmi {
namespace {

// Published Philox4x32-10 known-answer vectors.
TEST(PhiloxTest, KnownAnswers) {
  EXPECT_EQ(Philox4x32({0, 0, 0, 0}, {0, 0}),
            (std::array<uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                       {0xffffffff, 0xffffffff}),
            (std::array<uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                       {0xa4093822, 0x299f31d0}),
            (std::array<uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(SeedTest, ChildrenAreDistinctAndStable) {
  const Seed root(42);
  std::set<uint64_t> keys{root.Key()};
  for (uint64_t i = 0; i < 100; ++i) keys.insert(root.Child(i).Key());
  EXPECT_EQ(keys.size(), 101u);
  EXPECT_EQ(root.Child(3).Key(), Seed(42).Child(3).Key());
  EXPECT_NE(Seed(1).Child(0).Key(), Seed(0).Child(1).Key());
  EXPECT_EQ(root.Descend({1, 2, 3}), root.Child(1).Child(2).Child(3));
  EXPECT_NE(root.Descend({1, 2}).Key(), root.Descend({2, 1}).Key());
}

TEST(SeedTest, TextRoundTrip) {
  const Seed s = Seed(7).Descend({0, 12, 3});
  EXPECT_EQ(s.ToString(), "7/0/12/3");
  EXPECT_EQ(Seed::Parse(s.ToString()), s);
  EXPECT_EQ(Seed::Parse("9"), Seed(9));
  for (const char* bad : {"", "x", "1//2", "1/-3", "1/2/"}) {
    try {
      Seed::Parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfig);
    }
  }
}

TEST(RngTest, ReproducibleAndSeedSensitive) {
  Rng a(Seed(5).Child(1)), b(Seed(5).Child(1)), c(Seed(5).Child(2));
  int equal = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a(), y = b(), z = c();
    EXPECT_EQ(x, y);
    equal += x == z;
  }
  EXPECT_EQ(equal, 0);
}

TEST(RngTest, UniformAndNormalMoments) {
  Rng rng(Seed(11));
  const int n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    su2 += u * u;
    const double g = rng.Normal();
    sn += g;
    sn2 += g * g;
  }
  EXPECT_NEAR(su / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(su2 / n, 1.0 / 3.0, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 5 * std::sqrt(2.0 / n));
}

TEST(RngTest, UniformIndexCoversRange) {
  Rng rng(Seed(3));
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.UniformIndex(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(StatsTest, RunningStatsMatchesTwoPass) {
  Rng rng(Seed(1));
  std::vector<double> xs(1001);
  for (double& x : xs) x = 3.0 + 2.0 * rng.Normal();
  RunningStats all, left, right;
  for (size_t i = 0; i < xs.size(); ++i) {
    all.Add(xs[i]);
    (i < 400 ? left : right).Add(xs[i]);
  }
  left.Merge(right);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / (xs.size() - 1);
  EXPECT_NEAR(all.mean(), mean, 1e-12);
  EXPECT_NEAR(all.variance(), var, 1e-10);
  EXPECT_NEAR(left.mean(), mean, 1e-12);
  EXPECT_NEAR(left.variance(), var, 1e-10);
  const Estimate e = EstimateOf(xs);
  EXPECT_EQ(e.count, 1001);
  EXPECT_NEAR(e.half_width, kZ95 * std::sqrt(var / xs.size()), 1e-12);
  EXPECT_NEAR(e.std_error(), std::sqrt(var / xs.size()), 1e-12);
}

TEST(StatsTest, WilsonIntervalReferenceValues) {
  // 8 of 10 at 95%: textbook interval (0.4902, 0.9433).
  const Proportion p = WilsonInterval(8, 10);
  EXPECT_DOUBLE_EQ(p.value, 0.8);
  EXPECT_NEAR(p.lower, 0.4902, 1e-4);
  EXPECT_NEAR(p.upper, 0.9433, 1e-4);
  EXPECT_DOUBLE_EQ(WilsonInterval(0, 50).lower, 0.0);
  EXPECT_NEAR(WilsonInterval(50, 50).upper, 1.0, 1e-15);
}

TEST(StatsTest, LogLogSlopeOfPowerLaw) {
  const std::vector<double> x{25, 50, 100, 200, 400};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  EXPECT_NEAR(LogLogSlope(x, y), -0.5, 1e-12);
}

TEST(ParallelTest, ResultsIndependentOfWorkerCount) {
  auto draw = [](int i) {
    Rng rng(Seed(9).Child(i));
    return rng.Normal();
  };
  SetWorkerCount(1);
  const auto serial = ParallelMap(257, draw);
  SetWorkerCount(4);
  const auto threaded = ParallelMap(257, draw);
  EXPECT_EQ(serial, threaded);
  EXPECT_THROW(ParallelMap(50,
                           [](int i) -> int {
                             if (i == 17) throw Error(ErrorCode::kNumerical, "boom");
                             return i;
                           }),
               Error);
  SetWorkerCount(0);
}

TEST(DistributionTest, CubeMeanAndNorm) {
  Eigen::VectorXd p(4);
  p << 0.5, -0.25, 0.0, 1.0;
  const DataDistribution mu = DataDistribution::Cube(p);
  EXPECT_TRUE((mu.Mean() - p / 2.0).norm() < 1e-15);
  EXPECT_DOUBLE_EQ(mu.SecondMoment(), 1.0);
  Rng rng(Seed(2));
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(4);
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd z = mu.Sample(rng);
    ASSERT_NEAR(z.norm(), 1.0, 1e-12);
    sum += z;
  }
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(sum[k] / n, p[k] / 2.0, 0.01);
}

TEST(DistributionTest, RejectsInvalidParameters) {
  Eigen::VectorXd bad(2);
  bad << 0.5, 1.5;
  EXPECT_THROW(DataDistribution::Cube(bad), Error);
  EXPECT_THROW(DataDistribution::FiniteSupport({Eigen::VectorXd::Zero(2)}, {0.5}),
               Error);
  EXPECT_THROW(DataDistribution::Sphere(0), Error);
  EXPECT_THROW(RandomCubeParameters(3, 1.5, Seed(0)), Error);
}

TEST(DistributionTest, FiniteSupportFrequencies) {
  Eigen::VectorXd a(2), b(2);
  a << 1, 0;
  b << 0, -1;
  const DataDistribution mu = DataDistribution::FiniteSupport({a, b}, {0.25, 0.75});
  EXPECT_NEAR(mu.Mean()[0], 0.25, 1e-15);
  EXPECT_NEAR(mu.Mean()[1], -0.75, 1e-15);
  Rng rng(Seed(4));
  int first = 0;
  for (int i = 0; i < 40000; ++i) first += mu.Sample(rng)[0] == 1.0;
  EXPECT_NEAR(first / 40000.0, 0.25, 0.01);
}

TEST(DistributionTest, SphereIsUnitNormAndCentered) {
  const DataDistribution mu = DataDistribution::Sphere(5);
  Rng rng(Seed(6));
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(5);
  for (int i = 0; i < 20000; ++i) {
    const Eigen::VectorXd z = mu.Sample(rng);
    ASSERT_NEAR(z.norm(), 1.0, 1e-12);
    sum += z;
  }
  EXPECT_LT((sum / 20000).norm(), 0.03);
}

TEST(SampleTest, MembershipSelection) {
  const MembershipVector j = MembershipFromCode(5, 0b10110);
  EXPECT_EQ(j, (MembershipVector{0, 1, 1, 0, 1}));
  Eigen::MatrixXd c0(1, 5), c1(1, 5);
  c0 << 0, 1, 2, 3, 4;
  c1 << 10, 11, 12, 13, 14;
  const SuperSample ss(c0, c1);
  const Dataset train = SelectTrain(ss, j), ghost = SelectGhost(ss, j);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(train(0, i), j[i] ? 10 + i : i);
    EXPECT_EQ(ghost(0, i), j[i] ? i : 10 + i);
  }
  EXPECT_THROW(SelectTrain(ss, MembershipVector{0, 1}), Error);
}

TEST(SampleTest, SuperSampleColumnsAreIndependentDraws) {
  const DataDistribution mu = DataDistribution::Sphere(3);
  const SuperSample ss = SampleSuperSample(mu, 10, Seed(8));
  EXPECT_EQ(ss.n(), 10);
  EXPECT_EQ(ss.dim(), 3);
  EXPECT_GT((ss.column(0) - ss.column(1)).norm(), 0.1);
  const SuperSample again = SampleSuperSample(mu, 10, Seed(8));
  EXPECT_EQ(ss.column(1), again.column(1));
}

TEST(SampleTest, ProjectionOfMatchesMatrix) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(50);
  w[3] = 0.6;
  w[17] = -0.8;
  const Eigen::MatrixXd theta = SampleGaussianMatrix(50, 7, Seed(21));
  const Eigen::VectorXd direct = theta.transpose() * w;
  const Eigen::VectorXd lazy = GaussianProjectionOf(w, 7, Seed(21));
  EXPECT_LT((direct - lazy).norm(), 1e-12);
}

TEST(SampleTest, GaussianMatrixEntryVariance) {
  const Eigen::MatrixXd theta = SampleGaussianMatrix(4000, 5, Seed(1));
  const double var = theta.squaredNorm() / theta.size();
  EXPECT_NEAR(var, 0.2, 0.2 * 5 * std::sqrt(2.0 / theta.size()));
  EXPECT_THROW(SampleGaussianMatrix(3, 4, Seed(1)), Error);
}

TEST(SampleTest, UniformBallRadialLaw) {
  // P(|V| <= nu / 2) = 2^-d for the uniform ball.
  for (int d : {1, 3}) {
    Rng rng{Seed(static_cast<uint64_t>(d))};
    int inner = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
      const double r = SampleUniformBall(d, 2.0, rng).norm();
      ASSERT_LE(r, 2.0);
      inner += r <= 1.0;
    }
    const double p = std::pow(0.5, d);
    EXPECT_NEAR(inner / static_cast<double>(n), p, 5 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(SampleTest, StiefelIsOrthonormal) {
  const Eigen::MatrixXd u = SampleStiefel(30, 6, Seed(12));
  EXPECT_LT((u.transpose() * u - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-12);
  EXPECT_EQ(u, SampleStiefel(30, 6, Seed(12)));
}

}  // namespace
}  // namespace pcmi
