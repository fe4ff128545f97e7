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
#include <numbers>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "pcmi/bounds/bounds.h"
#include "pcmi/compress/compressor.h"
#include "pcmi/core/distribution.h"
#include "pcmi/core/error.h"
#include "pcmi/core/sample.h"
#include "pcmi/problems/problem.h"

namespace pcmi {
namespace {

constexpr double kLn2 = std::numbers::ln2;

McBudget SmallBudget(uint64_t seed, int outer = 20, int inner = 5) {
  McBudget b;
  b.outer = outer;
  b.inner = inner;
  b.seed = Seed(seed);
  b.population_samples = 2000;
  return b;
}

SuperSample DuplicatedColumns(const DataDistribution& mu, int n, uint64_t seed) {
  const Dataset column = SampleDataset(mu, n, Seed(seed));
  return SuperSample(column, column);
}

TEST(ClosedFormTest, ReferenceValues) {
  EXPECT_DOUBLE_EQ(ClosedFormClb(1, 1, 100), 0.8);
  EXPECT_DOUBLE_EQ(ClosedFormClb(2, 1, 100), 1.6);
  EXPECT_NEAR(ClosedFormClb(1, 1, 10000), 0.08, 1e-15);
  const CompressorConfig cfg = CompressorConfig::ForLinear(1);
  const double oracle = std::sqrt(8 * 1.96 * std::log(3.5) / 100) + 0.2 * std::pow(3.0, 0.25);
  EXPECT_NEAR(ClosedFormRate(cfg, 100), oracle, 1e-12);
  EXPECT_NEAR(ClosedFormRate(cfg, 100), 0.7063, 1e-3);
  EXPECT_LE(ClosedFormRate(cfg, 100), ClosedFormClb(1, 1, 100));
  EXPECT_NEAR(ClosedFormRate(cfg, 400) * 2, ClosedFormRate(cfg, 100), 1e-14);
}

TEST(ClosedFormTest, ClassicBound) {
  const ClassicCmiBounds zero = ClassicCmiBound(0.0, 10, 1, 1);
  EXPECT_EQ(zero.plain, 0.0);
  EXPECT_EQ(zero.clb, 0.0);
  for (int n : {5, 50, 500}) {
    EXPECT_NEAR(ClassicCmiBound(n * kLn2, n, 1, 1).clb, std::sqrt(8 * kLn2), 1e-12);
  }
  EXPECT_NEAR(std::sqrt(8 * kLn2), 2.3548, 1e-4);
  EXPECT_NEAR(ClassicCmiBound(std::log(3.5), 100, 1, 1).clb, 0.3166, 1e-4);
  EXPECT_NEAR(ClassicCmiBound(std::log(3.5), 100, 1, 1).plain,
              std::sqrt(2 * std::log(3.5) / 100), 1e-15);
}

TEST(OracleTest, ConstantAndRevealingLearners) {
  const int n = 8;
  Eigen::MatrixXd c0(1, n), c1(1, n);
  for (int i = 0; i < n; ++i) {
    c0(0, i) = 2.0 * i;
    c1(0, i) = 2.0 * i + 1.0;
  }
  const SuperSample ss(c0, c1);
  const Learner constant = [](const Dataset&) { return Eigen::VectorXd::Zero(1).eval(); };
  EXPECT_EQ(ExactCmiOracle(ss, constant).cmi_nats, 0.0);
  const Learner revealing = [](const Dataset& s) { return Eigen::VectorXd(s.row(0).transpose()); };
  const CmiOracleResult full = ExactCmiOracle(ss, revealing);
  EXPECT_NEAR(full.cmi_nats, n * kLn2, 1e-12);
  EXPECT_EQ(full.distinct_outputs, 1 << n);
  EXPECT_EQ(full.memberships, 1 << n);
}

TEST(OracleTest, CapacityLimit) {
  const DataDistribution mu = DataDistribution::Sphere(2);
  const SuperSample ss = SampleSuperSample(mu, kMaxOracleN + 1, Seed(1));
  try {
    ExactCmiOracle(ss, ErmLearner(Problem::Linear(2, 1, 1)));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapacity);
  }
}

TEST(OracleTest, RawErmGrowsWhileCompressedStaysUnderCap) {
  const int dim = 64;
  const Problem linear = Problem::Linear(dim, 1, 1);
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 1.0, Seed(3)));
  const CompressorConfig cfg = CompressorConfig::ForLinear(1);
  const double cap = CmiCap(cfg);
  for (int n : {4, 6, 10}) {
    const SuperSample ss = SampleSuperSample(mu, n, Seed(10 + n));
    const CmiOracleResult raw = ExactCmiOracle(ss, ErmLearner(linear));
    EXPECT_GE(raw.cmi_nats, 0.9 * n * kLn2);
    EXPECT_LE(raw.cmi_nats, n * kLn2 + 1e-12);
    const Projection theta = Projection::Sample(dim, cfg, Seed(20 + n));
    const CellQuantizer cells = CompressedCellQuantizer(theta, cfg);
    EXPECT_LE(ExactCmiOracle(ss, ErmLearner(linear), &cells).cmi_nats, cap + 1e-12);
    EXPECT_LE(ExactCompressedCmi1D(ss, ErmLearner(linear), theta, cfg), cap + 1e-12);
  }
}

TEST(DitheredCmiTest, TwoIntervalOracle) {
  // Two uniform laws of width 2 nu offset by delta share information
  // delta / (2 nu) * log 2 when delta <= 2 nu.
  const double nu = 0.4;
  for (double delta : {0.0, 0.1, 0.5, 0.8}) {
    const std::vector<double> centers{0.3, 0.3 + delta};
    EXPECT_NEAR(DitheredMixtureCmi1D(centers, nu), delta / (2 * nu) * kLn2, 1e-12);
  }
  EXPECT_NEAR(DitheredMixtureCmi1D(std::vector<double>{0.0, 5.0}, nu), kLn2, 1e-12);
  EXPECT_NEAR(DitheredMixtureCmi1D(std::vector<double>{1, 1, 1}, nu), 0.0, 1e-12);
  // Four well separated centers carry log 4.
  EXPECT_NEAR(DitheredMixtureCmi1D(std::vector<double>{0, 1, 2, 3}, nu), std::log(4.0), 1e-12);
}

TEST(DeltaEllTest, ZeroForIdenticalColumnsAndBoundedOtherwise) {
  const int dim = 32, n = 20;
  const Problem linear = Problem::Linear(dim, 1, 1);
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 1.0, Seed(4)));
  const CompressorConfig cfg = CompressorConfig::ForLinear(1);
  const Projection theta = Projection::Sample(dim, cfg, Seed(5));
  const Estimate same =
      DeltaEllHat(linear, DuplicatedColumns(mu, n, 6), theta, ErmLearner(linear), cfg, 8, Seed(7));
  EXPECT_EQ(same.mean, 0.0);
  const double ceiling = 4 * std::pow(cfg.clip_radius + cfg.dither_radius, 2);
  for (uint64_t s = 0; s < 5; ++s) {
    const SuperSample ss = SampleSuperSample(mu, n, Seed(100 + s));
    const Projection th = Projection::Sample(dim, cfg, Seed(200 + s));
    const Estimate e = DeltaEllHat(linear, ss, th, ErmLearner(linear), cfg, 16, Seed(300 + s));
    EXPECT_GE(e.mean, 0.0);
    EXPECT_GE(e.half_width, 0.0);
    EXPECT_LE(e.mean, ceiling + 3 * e.std_error());
  }
  const std::vector<double> per_index =
      DeltaEllPerIndex(linear, SampleSuperSample(mu, n, Seed(9)), theta, ErmLearner(linear), cfg, 8, Seed(7));
  EXPECT_EQ(per_index.size(), static_cast<size_t>(n));
  EXPECT_THROW(DeltaEllHat(linear, DuplicatedColumns(mu, n, 6), theta, ErmLearner(linear), cfg, 0,
                           Seed(7)),
               Error);
}

TEST(DistortionTest, IdentityCompressorHasNoDistortion) {
  const int dim = 6;
  const Problem linear = Problem::Linear(dim, 1, 1);
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 1.0, Seed(4)));
  const DistortionResult r = DistortionEstimate(linear, mu, ErmLearner(linear),
                                                CompressorConfig::Identity(dim), 10, SmallBudget(1));
  EXPECT_LE(std::abs(r.distortion.mean), r.distortion.half_width + 1e-9);
  EXPECT_NEAR(r.gen_original.mean, r.gen_compressed.mean, 1e-9);
}

TEST(DistortionTest, WithinClosedFormCeiling) {
  const int dim = 128, n = 100;
  const Problem linear = Problem::Linear(dim, 1, 1);
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 1.0, Seed(8)));
  const DistortionResult r = DistortionEstimate(linear, mu, ErmLearner(linear),
                                                CompressorConfig::ForLinear(1), n, SmallBudget(2, 100));
  const double ceiling = 2.0 / std::sqrt(n) * std::pow(3.0, 0.25);
  EXPECT_LE(std::abs(r.distortion.mean), ceiling);
  EXPECT_NEAR(ceiling, 0.2632, 1e-4);
}

TEST(CompressedBoundTest, TotalIsAssembledAndValid) {
  const int dim = 128;
  const Problem linear = Problem::Linear(dim, 1, 1);
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 1.0, Seed(8)));
  const CompressorConfig cfg = CompressorConfig::ForLinear(1);
  double previous = std::numeric_limits<double>::infinity();
  for (int n : {25, 100, 400}) {
    const BoundReport r = CompressedBound(linear, mu, ErmLearner(linear), cfg, n, SmallBudget(n, 40, 8));
    EXPECT_NEAR(r.cmi_term, CmiCap(cfg), 1e-15);
    EXPECT_NEAR(r.epsilon, r.distortion.mean + r.distortion.half_width, 1e-15);
    EXPECT_NEAR(r.total, r.rate_term.mean + r.epsilon, 1e-15);
    EXPECT_GE(r.rate_term.half_width, 0.0);
    EXPECT_LE(r.total, ClosedFormClb(1, 1, n) + r.rate_term.half_width);
    EXPECT_LE(r.gen_original.mean, r.total + 2 * r.gen_original.half_width);
    EXPECT_LE(r.total, previous);
    previous = r.total;
    const nlohmann::json j = r.ToJson();
    EXPECT_EQ(j.at("schema_version"), BoundReport::kSchemaVersion);
    EXPECT_EQ(j.at("mode"), "compressed");
  }
}

// With d = round(sqrt(n)) and a worst-case constant Delta-ell the rate term
// decays like n^(-1/4). Only exponents are checked: the worst-case assembly
// must match -1/4, and the measured bound must decay at least that fast.
TEST(CompressedBoundTest, GeneralizedLinearDecayExponent) {
  const int dim = 64;
  const Problem glm = Problem::GeneralizedLinear(dim, LogisticLoss(), 1.0);
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 1.0, Seed(21)));
  const Learner learner = GradientDescentLearner(glm, {.steps = 30, .step_size = 0.5});
  const std::vector<int> ns = {16, 64, 256, 1024};
  std::vector<BoundReport> reports;
  double worst_delta_ell = 0.0;
  for (int n : ns) {
    reports.push_back(CompressedBound(glm, mu, learner, CompressorConfig::ForGeneralizedLinear(n),
                                      n, SmallBudget(n, 20, 4)));
    worst_delta_ell = std::max(worst_delta_ell, reports.back().delta_ell.mean);
  }
  auto slope = [&](const std::vector<double>& y) {
    const double mx = std::accumulate(ns.begin(), ns.end(), 0.0,
                                      [](double a, int n) { return a + std::log(n); }) / ns.size();
    const double my = std::accumulate(y.begin(), y.end(), 0.0,
                                      [](double a, double v) { return a + std::log(v); }) / y.size();
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < ns.size(); ++i) {
      sxy += (std::log(ns[i]) - mx) * (std::log(y[i]) - my);
      sxx += (std::log(ns[i]) - mx) * (std::log(ns[i]) - mx);
    }
    return sxy / sxx;
  };
  std::vector<double> worst_case, measured;
  for (size_t i = 0; i < ns.size(); ++i) {
    worst_case.push_back(std::sqrt(2.0 * worst_delta_ell * reports[i].cmi_term / ns[i]));
    measured.push_back(reports[i].total);
  }
  EXPECT_NEAR(slope(worst_case), -0.25, 0.01);
  EXPECT_LE(slope(measured), -0.25 + 0.1);
}

TEST(SingleDatumTest, MatchesCompressedBoundAtOneSample) {
  const int dim = 16;
  const Problem linear = Problem::Linear(dim, 1, 1);
  const DataDistribution mu = DataDistribution::Cube(RandomCubeParameters(dim, 1.0, Seed(8)));
  const CompressorConfig cfg = CompressorConfig::ForLinear(1);
  const BoundReport a = CompressedBound(linear, mu, ErmLearner(linear), cfg, 1, SmallBudget(5));
  const BoundReport b = SingleDatumBound(linear, mu, ErmLearner(linear), cfg, 1, SmallBudget(5));
  EXPECT_NEAR(a.total, b.total, 1e-12);
  const BoundReport c = SingleDatumBound(linear, mu, ErmLearner(linear), cfg, 50, SmallBudget(6));
  EXPECT_TRUE(std::isfinite(c.total));
  EXPECT_EQ(c.per_index_delta_ell.size(), 50u);
}

TEST(BudgetTest, ValidationAndScaling) {
  McBudget b = SmallBudget(1, 100, 10);
  EXPECT_EQ(b.Scaled(0.1).outer, 10);
  EXPECT_EQ(b.Scaled(0.001).outer, 1);
  b.inner = 0;
  EXPECT_THROW(b.Validate(), Error);
}

TEST(BoundReportTest, CsvRowMatchesHeader) {
  const Problem linear = Problem::Linear(4, 1, 1);
  const DataDistribution mu = DataDistribution::Sphere(4);
  const BoundReport r = CompressedBound(linear, mu, ErmLearner(linear),
                                      CompressorConfig::ForLinear(1), 5, SmallBudget(3, 4, 2));
  auto columns = [](const std::string& line) {
    return std::count(line.begin(), line.end(), ',');
  };
  EXPECT_EQ(columns(BoundReport::CsvHeader()), columns(r.CsvRow()));
}

}  // namespace
}  // namespace pcmi
