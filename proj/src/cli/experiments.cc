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

#include "pcmi/cli/experiments.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "pcmi/bounds/bounds.h"
#include "pcmi/compress/compressor.h"
#include "pcmi/core/distribution.h"
#include "pcmi/core/error.h"
#include "pcmi/core/parallel.h"
#include "pcmi/core/sample.h"
#include "pcmi/core/stats.h"
#include "pcmi/memor/recall_game.h"
#include "pcmi/mixent/mixture_entropy.h"
#include "pcmi/problems/problem.h"
#include "pcmi/sgld/sgld.h"

namespace pcmi {
namespace {

using nlohmann::json;

constexpr int64_t kChunk = 10000;

[[noreturn]] void ConfigFail(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

// Converts module errors raised while validating config values into config
// errors so that the CLI reports them with the config exit code.
template <typename Fn>
auto Validated(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    ConfigFail(what + ": " + e.what());
  }
}

int64_t Scaled(int64_t count, double fraction, int64_t minimum) {
  return std::max<int64_t>(minimum, static_cast<int64_t>(std::ceil(count * fraction)));
}

json EstimateJson(const Estimate& e) {
  return {{"mean", e.mean}, {"half_width", e.half_width}, {"count", e.count}};
}

json ProportionJson(const Proportion& p) {
  return {{"value", p.value}, {"lower", p.lower}, {"upper", p.upper},
          {"trials", p.trials}};
}

void AddCheck(std::vector<Check>* checks, std::string name, bool passed,
              const std::string& detail) {
  checks->push_back({std::move(name), passed, detail});
}

std::string Detail(std::initializer_list<std::pair<const char*, double>> items) {
  std::ostringstream out;
  out.precision(6);
  bool first = true;
  for (const auto& [name, value] : items) {
    if (!first) out << ", ";
    out << name << '=' << value;
    first = false;
  }
  return out.str();
}

// Accumulates moments over chunks of Monte Carlo draws in parallel; chunk
// results are merged in index order.
template <typename Fn>
std::vector<RunningStats> ChunkedStats(int64_t samples, int width, Fn&& draw) {
  const int chunks = static_cast<int>((samples + kChunk - 1) / kChunk);
  const auto parts = ParallelMap(chunks, [&](int c) {
    std::vector<RunningStats> stats(width);
    const int64_t begin = c * kChunk;
    const int64_t end = std::min(samples, begin + kChunk);
    draw(c, begin, end, stats);
    return stats;
  });
  std::vector<RunningStats> total(width);
  for (const auto& part : parts) {
    for (int k = 0; k < width; ++k) total[k].Merge(part[k]);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Shared config blocks.

struct ProblemSpec {
  std::string kind = "linear";
  int dim = 0;
  double lipschitz = 1.0;
  double radius = 1.0;
  double lambda = 1.0;
  std::string link = "logistic";

  Problem Build() const {
    if (kind == "linear") return Problem::Linear(dim, lipschitz, radius);
    if (kind == "strongly_convex") {
      return Problem::StronglyConvex(dim, lipschitz, lambda, radius);
    }
    if (kind == "squared") return Problem::Squared(dim, lipschitz, radius);
    GeneralizedLinearLoss loss = link == "absolute" ? AbsoluteLoss() : LogisticLoss();
    loss.link_lipschitz = lipschitz;
    return Problem::GeneralizedLinear(dim, std::move(loss), radius);
  }
  // Product L R for the closed-form comparisons.
  double Scale() const { return lipschitz * radius; }
  json Json() const {
    return {{"kind", kind}, {"D", dim}, {"L", lipschitz}, {"R", radius}};
  }
};

ProblemSpec ParseProblem(Config& c) {
  ProblemSpec p;
  p.kind = c.String("problem", "kind", "linear");
  p.dim = c.Int("problem", "D");
  p.lipschitz = c.Double("problem", "L", 1.0);
  p.radius = c.Double("problem", "R", 1.0);
  if (p.kind == "strongly_convex") p.lambda = c.Double("problem", "lambda");
  if (p.kind == "generalized_linear") {
    p.link = c.String("problem", "link", "logistic");
    if (p.link != "logistic" && p.link != "absolute") {
      ConfigFail("problem.link must be logistic or absolute");
    }
  }
  if (p.kind != "linear" && p.kind != "strongly_convex" && p.kind != "squared" &&
      p.kind != "generalized_linear") {
    ConfigFail("unknown problem.kind '" + p.kind + "'");
  }
  Validated("problem", [&] { return p.Build(); });
  return p;
}

struct DistributionSpec {
  std::string kind = "cube";
  int dim = 0;
  double p_scale = 1.0;
  Seed seed;

  DataDistribution Build() const {
    if (kind == "sphere") return DataDistribution::Sphere(dim);
    return DataDistribution::Cube(RandomCubeParameters(dim, p_scale, seed));
  }
  json Json() const {
    return {{"kind", kind}, {"p_scale", p_scale}, {"p_seed", seed.ToString()}};
  }
};

DistributionSpec ParseDistribution(Config& c, int dim, const Seed& root) {
  DistributionSpec d;
  d.dim = dim;
  d.kind = c.String("distribution", "kind", "cube");
  if (d.kind != "cube" && d.kind != "sphere") {
    ConfigFail("distribution.kind must be cube or sphere");
  }
  if (d.kind == "cube") {
    d.p_scale = c.Double("distribution", "p_scale", 1.0);
    d.seed = Seed(static_cast<uint64_t>(
        c.Int64("distribution", "p_seed", static_cast<int64_t>(root.root() + 1))));
  }
  Validated("distribution", [&] { return d.Build(); });
  return d;
}

// Compressor with d either fixed or tied to round(sqrt(n)).
struct CompressorSpec {
  std::optional<int> d;
  double clip = 1.0;
  double nu = 0.4;
  ProjectionKind projection = ProjectionKind::kGaussian;

  CompressorConfig Resolve(int n, int dim) const {
    if (projection == ProjectionKind::kIdentity) return CompressorConfig::Identity(dim);
    CompressorConfig cfg;
    cfg.d = d ? *d : CompressorConfig::ForGeneralizedLinear(n).d;
    cfg.clip_radius = clip;
    cfg.dither_radius = nu;
    return cfg;
  }
};

CompressorSpec ParseCompressor(Config& c, int dim) {
  CompressorSpec s;
  const std::string d = c.String("compressor", "d", "1");
  if (d != "auto") {
    s.d = Validated("compressor.d", [&] {
      return static_cast<int>(std::stoi(d));
    });
  }
  s.clip = c.Double("compressor", "clip", 1.0);
  s.nu = c.Double("compressor", "nu", 0.4);
  const std::string projection = c.String("compressor", "projection", "gaussian");
  if (projection == "identity") {
    s.projection = ProjectionKind::kIdentity;
  } else if (projection != "gaussian") {
    ConfigFail("compressor.projection must be gaussian or identity");
  }
  Validated("compressor", [&] {
    s.Resolve(1, dim).Validate();
    return 0;
  });
  if (s.d && *s.d > dim) ConfigFail("compressor.d must not exceed problem.D");
  return s;
}

struct LearnerSpec {
  std::string kind = "erm";
  GradientDescentOptions gd;

  Learner Build(const Problem& problem) const {
    if (kind == "erm") return ErmLearner(problem);
    return GradientDescentLearner(problem, gd);
  }
};

LearnerSpec ParseLearner(Config& c, const ProblemSpec& problem) {
  LearnerSpec l;
  l.kind = c.String("learner", "kind",
                    problem.kind == "linear" || problem.kind == "strongly_convex"
                        ? "erm"
                        : "gd");
  if (l.kind == "gd") {
    l.gd.steps = c.Int("learner", "steps", 100);
    l.gd.step_size = c.Double("learner", "step_size", 0.5);
  } else if (l.kind != "erm") {
    ConfigFail("learner.kind must be erm or gd");
  }
  Validated("learner", [&] { return l.Build(problem.Build()); });
  return l;
}

McBudget ParseBudget(Config& c, const Seed& seed, int outer, int inner) {
  McBudget b;
  b.outer = c.Int("budget", "outer", outer);
  b.inner = c.Int("budget", "inner", inner);
  b.population_samples = c.Int64("budget", "population_samples", 20000);
  b.seed = seed;
  Validated("budget", [&] {
    b.Validate();
    return 0;
  });
  return b;
}

void RequirePositiveList(const std::vector<int>& values, const std::string& key) {
  for (int v : values) {
    if (v < 1) ConfigFail(key + " entries must be >= 1");
  }
}

// ---------------------------------------------------------------------------

class MomentsCheck : public Experiment {
 public:
  explicit MomentsCheck(Config& c, const Seed& seed) : seed_(seed) {
    dim_ = c.Int("moments", "D", 20);
    d_ = c.Int("moments", "d", 4);
    samples_ = c.Int64("moments", "samples", 1000000);
    ball_dims_ = c.IntList("moments", "ball_dims", std::vector<int>{1, 2, 5, 20});
    ball_nu_ = c.Double("moments", "ball_nu", 1.0);
    ball_samples_ = c.Int64("moments", "ball_samples", 1000000);
    tail_dims_ = c.IntList("moments", "tail_dims", std::vector<int>{1, 10, 100});
    tail_clips_ = c.DoubleList("moments", "tail_clips", std::vector<double>{1.05, 1.1});
    tail_samples_ = c.Int64("moments", "tail_samples", 100000);
    tail_ambient_ = c.Int("moments", "tail_ambient", 128);
    m2_tol_ = c.Double("moments", "m2_tolerance", 0.03);
    m4_tol_ = c.Double("moments", "m4_tolerance", 0.08);
    ball_tol_ = c.Double("moments", "ball_tolerance", 0.02);
    Validated("moments", [&] {
      PushforwardNormMoments(dim_, d_, 1.0);
      for (int d : ball_dims_) BallCoordAbsMean(d, ball_nu_);
      for (double clip : tail_clips_) {
        CompressorConfig cfg;
        cfg.clip_radius = clip;
        cfg.Validate();
      }
      return 0;
    });
    RequirePositiveList(tail_dims_, "moments.tail_dims");
    if (samples_ < 2 || ball_samples_ < 2 || tail_samples_ < 2) {
      ConfigFail("moments sample counts must be >= 2");
    }
  }

  std::string kind() const override { return "moments-check"; }

  ExperimentOutput Run(double fraction) const override {
    ExperimentOutput out;
    std::ostringstream csv;
    csv.precision(17);
    csv << "# quantity: checked moment; params: its parameters; mc: Monte Carlo "
           "estimate; half_width: 95% CI half-width; exact: closed form\n";
    csv << "quantity,params,mc,half_width,exact\n";

    // Norm moments of Theta Theta^T e_1.
    const int64_t samples = Scaled(samples_, fraction, 1000);
    const Seed moment_seed = seed_.Child(0);
    const auto stats = ChunkedStats(samples, 2, [&](int, int64_t begin, int64_t end,
                                                    std::vector<RunningStats>& s) {
      for (int64_t k = begin; k < end; ++k) {
        const Eigen::MatrixXd theta =
            SampleGaussianMatrix(dim_, d_, moment_seed.Child(k));
        const Eigen::VectorXd v = theta * theta.row(0).transpose();
        const double n2 = v.squaredNorm();
        s[0].Add(n2);
        s[1].Add(n2 * n2);
      }
    });
    const NormMoments exact = PushforwardNormMoments(dim_, d_, 1.0);
    const Estimate m2 = stats[0].ToEstimate(), m4 = stats[1].ToEstimate();
    out.results["pushforward"] = {{"D", dim_},          {"d", d_},
                                  {"samples", samples}, {"m2", EstimateJson(m2)},
                                  {"m2_exact", exact.m2}, {"m4", EstimateJson(m4)},
                                  {"m4_exact", exact.m4}};
    AddCheck(&out.checks, "pushforward_m2",
             std::abs(m2.mean / exact.m2 - 1.0) <= m2_tol_,
             Detail({{"mc", m2.mean}, {"exact", exact.m2}, {"tol", m2_tol_}}));
    AddCheck(&out.checks, "pushforward_m4",
             std::abs(m4.mean / exact.m4 - 1.0) <= m4_tol_,
             Detail({{"mc", m4.mean}, {"exact", exact.m4}, {"tol", m4_tol_}}));
    csv << "m2,D=" << dim_ << " d=" << d_ << ',' << m2.mean << ',' << m2.half_width
        << ',' << exact.m2 << '\n';
    csv << "m4,D=" << dim_ << " d=" << d_ << ',' << m4.mean << ',' << m4.half_width
        << ',' << exact.m4 << '\n';

    // Coordinate moment of the uniform ball.
    const int64_t ball_samples = Scaled(ball_samples_, fraction, 1000);
    json ball = json::array();
    for (size_t b = 0; b < ball_dims_.size(); ++b) {
      const int d = ball_dims_[b];
      const Seed ball_seed = seed_.Descend({1, b});
      const auto s = ChunkedStats(ball_samples, 1, [&](int c, int64_t begin, int64_t end,
                                                       std::vector<RunningStats>& st) {
        Rng rng(ball_seed.Child(c));
        for (int64_t k = begin; k < end; ++k) {
          st[0].Add(std::abs(SampleUniformBall(d, ball_nu_, rng)[0]));
        }
      });
      const Estimate e = s[0].ToEstimate();
      const double exact_value = BallCoordAbsMean(d, ball_nu_);
      ball.push_back({{"d", d}, {"nu", ball_nu_}, {"mc", EstimateJson(e)},
                      {"exact", exact_value}});
      AddCheck(&out.checks, "ball_coord_abs_mean[d=" + std::to_string(d) + "]",
               std::abs(e.mean / exact_value - 1.0) <= ball_tol_,
               Detail({{"mc", e.mean}, {"exact", exact_value}, {"tol", ball_tol_}}));
      csv << "ball_abs_coord,d=" << d << " nu=" << ball_nu_ << ',' << e.mean << ','
          << e.half_width << ',' << exact_value << '\n';
    }
    out.results["ball"] = ball;

    // Clip frequency against the tail bound.
    const int64_t tail_samples = Scaled(tail_samples_, fraction, 1000);
    json tail = json::array();
    uint64_t cell = 0;
    for (int d : tail_dims_) {
      for (double clip : tail_clips_) {
        const Seed tail_seed = seed_.Descend({2, cell++});
        const int ambient = std::max(tail_ambient_, d);
        Eigen::VectorXd e1 = Eigen::VectorXd::Zero(ambient);
        e1[0] = 1.0;
        const auto s = ChunkedStats(tail_samples, 1, [&](int, int64_t begin, int64_t end,
                                                         std::vector<RunningStats>& st) {
          for (int64_t k = begin; k < end; ++k) {
            const Eigen::VectorXd u = GaussianProjectionOf(e1, d, tail_seed.Child(k));
            st[0].Add(u.norm() > clip ? 1.0 : 0.0);
          }
        });
        const double freq = s[0].mean();
        const double sigma = std::sqrt(freq * (1.0 - freq) / tail_samples);
        const double bound = TailBound(d, clip);
        tail.push_back({{"d", d}, {"clip", clip}, {"frequency", freq},
                        {"sigma", sigma}, {"bound", bound}, {"samples", tail_samples}});
        AddCheck(&out.checks,
                 "tail_bound[d=" + std::to_string(d) + ",c=" + FormatDouble(clip) + "]",
                 freq <= bound + 3.0 * sigma,
                 Detail({{"frequency", freq}, {"bound", bound}, {"sigma", sigma}}));
        csv << "clip_frequency,d=" << d << " c_w=" << clip << ',' << freq << ','
            << kZ95 * sigma << ',' << bound << '\n';
      }
    }
    out.results["tail"] = tail;
    out.csv.push_back({"moments.csv", csv.str()});
    return out;
  }

 private:
  Seed seed_;
  int dim_, d_;
  int64_t samples_;
  std::vector<int> ball_dims_;
  double ball_nu_;
  int64_t ball_samples_;
  std::vector<int> tail_dims_;
  std::vector<double> tail_clips_;
  int64_t tail_samples_;
  int tail_ambient_;
  double m2_tol_, m4_tol_, ball_tol_;
};

// ---------------------------------------------------------------------------

class FTable : public Experiment {
 public:
  FTable(Config& c, const Seed& seed) : seed_(seed) {
    a_max_ = c.Double("ftable", "a_max", 8.0);
    a_step_ = c.Double("ftable", "a_step", 0.5);
    p_values_ = c.DoubleList("ftable", "p_values",
                             std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4, 0.5});
    mc_samples_ = c.Int64("ftable", "mc_samples", 10000000);
    mc_a_ = c.Double("ftable", "mc_a", 2.0);
    mc_p_ = c.Double("ftable", "mc_p", 0.5);
    if (!(a_step_ > 0.0) || !(a_max_ >= 0.0)) {
      ConfigFail("ftable.a_step must be > 0 and a_max >= 0");
    }
    for (double p : p_values_) {
      if (!(p > 0.0 && p <= 0.5)) ConfigFail("ftable.p_values must lie in (0, 0.5]");
    }
    if (mc_samples_ < 2) ConfigFail("ftable.mc_samples must be >= 2");
    Validated("ftable", [&] { return MixtureMutualInformation({mc_a_, mc_p_}); });
  }

  std::string kind() const override { return "f-table"; }

  ExperimentOutput Run(double fraction) const override {
    ExperimentOutput out;
    const double log2 = std::numbers::ln2;
    std::vector<double> a_grid;
    for (int k = 0; k * a_step_ <= a_max_ + 1e-12; ++k) a_grid.push_back(k * a_step_);

    std::ostringstream csv;
    csv << "# a: mean separation; p: weight of the N(0,1) component; f: mutual "
           "information in nats\n";
    WriteMixtureTable(a_grid, p_values_, csv);
    out.csv.push_back({"f_table.csv", csv.str()});

    json grid = json::array();
    double zero_max = 0.0, sym_a = 0.0, sym_p = 0.0, limit_gap = 0.0;
    bool monotone_a = true, monotone_p = true, in_range = true;
    std::vector<double> p_sorted = p_values_;
    std::sort(p_sorted.begin(), p_sorted.end());
    for (double p : p_values_) {
      double previous = -1.0;
      for (double a : a_grid) {
        const double f = MixtureMutualInformation({a, p});
        grid.push_back({{"a", a}, {"p", p}, {"f", f}});
        if (a == 0.0) zero_max = std::max(zero_max, std::abs(f));
        if (a > 0.0 && !(f > previous)) monotone_a = false;
        if (f < 0.0 || f > log2) in_range = false;
        previous = f;
        sym_a = std::max(sym_a, std::abs(f - MixtureMutualInformation({-a, p})));
        sym_p = std::max(sym_p, std::abs(f - MixtureMutualInformation({a, 1.0 - p})));
      }
      limit_gap = std::max(limit_gap, std::abs(MixtureMutualInformation({50.0, p}) -
                                               log2 * BinaryEntropyBits(p)));
    }
    for (double a : a_grid) {
      if (a == 0.0) continue;
      double previous = -1.0;
      for (double p : p_sorted) {
        const double f = MixtureMutualInformation({a, p});
        if (!(f > previous)) monotone_p = false;
        previous = f;
      }
    }
    const double f50 = MixtureMutualInformation({50.0, 0.5});

    // Monte Carlo entropy of the mixture as an independent check.
    const int64_t samples = Scaled(mc_samples_, fraction, 10000);
    const MixtureParams mp{mc_a_, mc_p_};
    const auto stats = ChunkedStats(samples, 1, [&](int c, int64_t begin, int64_t end,
                                                    std::vector<RunningStats>& st) {
      Rng rng(seed_.Child(c));
      for (int64_t k = begin; k < end; ++k) {
        const double x = rng.Normal() + (rng.Uniform() < mp.p ? 0.0 : mp.a);
        st[0].Add(-GmixLogPdf(x, mp));
      }
    });
    const Estimate h_mc = stats[0].ToEstimate();
    const double f_mc = h_mc.mean - 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
    const double f_quad = MixtureMutualInformation(mp);

    out.results["grid"] = grid;
    out.results["summary"] = {{"max_abs_f_at_zero", zero_max},
                              {"max_sign_asymmetry", sym_a},
                              {"max_weight_asymmetry", sym_p},
                              {"max_limit_gap_a50", limit_gap},
                              {"f_50_half", f50},
                              {"mc_samples", samples},
                              {"f_quadrature", f_quad},
                              {"f_monte_carlo", f_mc},
                              {"f_monte_carlo_half_width", h_mc.half_width}};
    AddCheck(&out.checks, "f_zero_separation", zero_max < 1e-8,
             Detail({{"max_abs", zero_max}}));
    AddCheck(&out.checks, "f_large_separation", std::abs(f50 - log2) <= 1e-3,
             Detail({{"f(50,0.5)", f50}}));
    AddCheck(&out.checks, "f_limit_approach", limit_gap <= 1e-6,
             Detail({{"max_gap", limit_gap}}));
    AddCheck(&out.checks, "f_sign_symmetry", sym_a <= 1e-10, Detail({{"max", sym_a}}));
    AddCheck(&out.checks, "f_weight_symmetry", sym_p <= 1e-10, Detail({{"max", sym_p}}));
    AddCheck(&out.checks, "f_strictly_increasing_in_a", monotone_a, "");
    AddCheck(&out.checks, "f_increasing_in_p", monotone_p, "");
    AddCheck(&out.checks, "f_range", in_range, "");
    AddCheck(&out.checks, "f_quadrature_vs_monte_carlo",
             std::abs(f_quad - f_mc) <= 1e-3,
             Detail({{"quadrature", f_quad}, {"monte_carlo", f_mc}}));
    return out;
  }

 private:
  Seed seed_;
  double a_max_, a_step_;
  std::vector<double> p_values_;
  int64_t mc_samples_;
  double mc_a_, mc_p_;
};

// ---------------------------------------------------------------------------

class BoundCurve : public Experiment {
 public:
  BoundCurve(Config& c, const Seed& seed) : seed_(seed) {
    problem_ = ParseProblem(c);
    distribution_ = ParseDistribution(c, problem_.dim, seed);
    compressor_ = ParseCompressor(c, problem_.dim);
    learner_ = ParseLearner(c, problem_);
    budget_ = ParseBudget(c, seed.Child(0), 200, 20);
    n_values_ = c.IntList("curve", "n", std::vector<int>{25, 50, 100, 200, 400});
    RequirePositiveList(n_values_, "curve.n");
    mode_ = c.String("curve", "mode", "compressed");
    if (mode_ != "compressed" && mode_ != "single_datum") {
      ConfigFail("curve.mode must be compressed or single_datum");
    }
    expected_slope_ = c.Double("curve", "expected_slope", -0.5);
    slope_tolerance_ = c.Double("curve", "slope_tolerance", 0.1);
    check_clb_ = c.Bool("curve", "check_clb",
                        problem_.kind == "linear" || problem_.kind == "strongly_convex");
  }

  std::string kind() const override { return "bound-curve"; }

  ExperimentOutput Run(double fraction) const override {
    ExperimentOutput out;
    const Problem problem = problem_.Build();
    const DataDistribution mu = distribution_.Build();
    const Learner learner = learner_.Build(problem);
    std::ostringstream csv;
    csv.precision(17);
    csv << "# n: sample size; d: compressed dimension; measured_gen: mean "
           "generalization error of the learner; bound_total: assembled bound; "
           "clb: 8LR/sqrt(n); closed_form_rate: analytic rate of the compressor\n";
    csv << "n,d,measured_gen,measured_gen_hw,bound_total,rate_term,rate_term_hw,"
           "epsilon,clb,closed_form_rate\n";
    json rows = json::array();
    std::vector<double> ns, totals;
    for (size_t g = 0; g < n_values_.size(); ++g) {
      const int n = n_values_[g];
      const CompressorConfig cfg = compressor_.Resolve(n, problem_.dim);
      McBudget budget = budget_.Scaled(fraction);
      budget.seed = budget_.seed.Child(g);
      const BoundReport report =
          mode_ == "compressed" ? CompressedBound(problem, mu, learner, cfg, n, budget)
                              : SingleDatumBound(problem, mu, learner, cfg, n, budget);
      const double clb = ClosedFormClb(problem_.lipschitz, problem_.radius, n);
      const double rate = ClosedFormRate(cfg, n);
      rows.push_back({{"n", n}, {"report", report.ToJson()}, {"clb", clb},
                      {"closed_form_rate", rate}});
      csv << n << ',' << cfg.d << ',' << report.gen_original.mean << ','
          << report.gen_original.half_width << ',' << report.total << ','
          << report.rate_term.mean << ',' << report.rate_term.half_width << ','
          << report.epsilon << ',' << clb << ',' << rate << '\n';
      ns.push_back(n);
      totals.push_back(report.total);
      const std::string tag = "[n=" + std::to_string(n) + "]";
      const double gen = report.gen_original.mean;
      if (check_clb_) {
        AddCheck(&out.checks, "measured_gen_within_clb" + tag, std::abs(gen) <= clb,
                 Detail({{"gen", gen}, {"clb", clb}}));
        AddCheck(&out.checks, "bound_within_clb" + tag,
                 report.total <= clb + report.rate_term.half_width,
                 Detail({{"total", report.total}, {"clb", clb},
                         {"ci", report.rate_term.half_width}}));
      }
      AddCheck(&out.checks, "bound_validity" + tag,
               gen <= report.total + 2.0 * report.gen_original.half_width,
               Detail({{"gen", gen}, {"total", report.total}}));
    }
    out.results["rows"] = rows;
    if (ns.size() >= 2) {
      bool positive = std::all_of(totals.begin(), totals.end(), [](double t) { return t > 0; });
      const double slope = positive ? LogLogSlope(ns, totals)
                                    : std::numeric_limits<double>::quiet_NaN();
      out.results["log_log_slope"] = positive ? json(slope) : json(nullptr);
      AddCheck(&out.checks, "log_log_slope",
               positive && std::abs(slope - expected_slope_) <= slope_tolerance_,
               Detail({{"slope", slope}, {"expected", expected_slope_},
                       {"tol", slope_tolerance_}}));
    }
    out.csv.push_back({"bound_curve.csv", csv.str()});
    return out;
  }

 private:
  Seed seed_;
  ProblemSpec problem_;
  DistributionSpec distribution_;
  CompressorSpec compressor_;
  LearnerSpec learner_;
  McBudget budget_;
  std::vector<int> n_values_;
  std::string mode_;
  double expected_slope_, slope_tolerance_;
  bool check_clb_;
};

// ---------------------------------------------------------------------------

class Counterexample : public Experiment {
 public:
  Counterexample(Config& c, const Seed& seed) : seed_(seed) {
    problem_ = ParseProblem(c);
    if (problem_.kind != "linear" && problem_.kind != "strongly_convex") {
      ConfigFail("counterexample needs a linear or strongly_convex problem");
    }
    distribution_ = ParseDistribution(c, problem_.dim, seed);
    compressor_ = ParseCompressor(c, problem_.dim);
    if (!compressor_.d) ConfigFail("counterexample needs a fixed compressor.d");
    budget_ = ParseBudget(c, seed.Child(1), 50, 10);
    n_values_ = c.IntList("counterexample", "n", std::vector<int>{6, 8, 10, 12});
    for (int n : n_values_) {
      if (n < 1 || n > kMaxOracleN) {
        ConfigFail("counterexample.n entries must lie in [1, " +
                   std::to_string(kMaxOracleN) + "]");
      }
    }
  }

  std::string kind() const override { return "counterexample"; }

  ExperimentOutput Run(double fraction) const override {
    ExperimentOutput out;
    const Problem problem = problem_.Build();
    const DataDistribution mu = distribution_.Build();
    const Learner learner = ErmLearner(problem);
    const double log2 = std::numbers::ln2;
    const double classic_limit = problem_.Scale() * std::sqrt(8.0 * log2);
    std::ostringstream csv;
    csv.precision(17);
    csv << "# n: sample size; raw_cmi: exact CMI of the raw learner (nats); "
           "cell_cmi: exact CMI of the clipped lattice cell; dithered_cmi: exact "
           "CMI of the dithered d=1 output; classic_clb_raw: LR sqrt(8 raw/n); "
           "cap: d log((c+nu)/nu); compressed_rate: closed-form rate; bound_total: "
           "assembled bound\n";
    csv << "n,raw_cmi,cell_cmi,dithered_cmi,classic_clb_raw,cap,compressed_rate,"
           "bound_total\n";
    json rows = json::array();
    std::vector<double> ns, rates, classic;
    for (size_t g = 0; g < n_values_.size(); ++g) {
      const int n = n_values_[g];
      const CompressorConfig cfg = compressor_.Resolve(n, problem_.dim);
      const SuperSample ss = SampleSuperSample(mu, n, seed_.Descend({0, g, 0}));
      const Projection theta = Projection::Sample(problem_.dim, cfg, seed_.Descend({0, g, 1}));
      const CmiOracleResult raw = ExactCmiOracle(ss, learner);
      const CellQuantizer quantizer = CompressedCellQuantizer(theta, cfg);
      const CmiOracleResult cell = ExactCmiOracle(ss, learner, &quantizer);
      const double dithered = cfg.d == 1 ? ExactCompressedCmi1D(ss, learner, theta, cfg)
                                         : std::numeric_limits<double>::quiet_NaN();
      const ClassicCmiBounds raw_bounds =
          ClassicCmiBound(raw.cmi_nats, n, problem_.lipschitz, problem_.radius);
      const double cap = CmiCap(cfg);
      const double rate = ClosedFormRate(cfg, n);
      McBudget budget = budget_.Scaled(fraction);
      budget.seed = budget_.seed.Child(g);
      const BoundReport report = CompressedBound(problem, mu, learner, cfg, n, budget);
      rows.push_back({{"n", n},
                      {"raw_cmi", raw.cmi_nats},
                      {"raw_distinct_outputs", raw.distinct_outputs},
                      {"cell_cmi", cell.cmi_nats},
                      {"cell_distinct_outputs", cell.distinct_outputs},
                      {"dithered_cmi", cfg.d == 1 ? json(dithered) : json(nullptr)},
                      {"classic_plain_raw", raw_bounds.plain},
                      {"classic_clb_raw", raw_bounds.clb},
                      {"cap", cap},
                      {"compressed_rate", rate},
                      {"compressed", report.ToJson()}});
      csv << n << ',' << raw.cmi_nats << ',' << cell.cmi_nats << ',' << dithered << ','
          << raw_bounds.clb << ',' << cap << ',' << rate << ',' << report.total << '\n';
      ns.push_back(n);
      rates.push_back(rate);
      classic.push_back(raw_bounds.clb);
      const std::string tag = "[n=" + std::to_string(n) + "]";
      AddCheck(&out.checks, "raw_cmi_grows" + tag, raw.cmi_nats >= 0.9 * n * log2,
               Detail({{"raw", raw.cmi_nats}, {"floor", 0.9 * n * log2}}));
      AddCheck(&out.checks, "cell_cmi_within_cap" + tag, cell.cmi_nats <= cap + 1e-12,
               Detail({{"cell", cell.cmi_nats}, {"cap", cap}}));
      if (cfg.d == 1) {
        AddCheck(&out.checks, "dithered_cmi_within_cap" + tag, dithered <= cap + 1e-12,
                 Detail({{"dithered", dithered}, {"cap", cap}}));
      }
      AddCheck(&out.checks, "classic_clb_does_not_decay" + tag,
               std::abs(raw_bounds.clb / classic_limit - 1.0) <= 0.06,
               Detail({{"clb", raw_bounds.clb}, {"limit", classic_limit}}));
    }
    out.results["rows"] = rows;
    if (ns.size() >= 2) {
      const double rate_slope = LogLogSlope(ns, rates);
      const double classic_slope = LogLogSlope(ns, classic);
      out.results["compressed_rate_slope"] = rate_slope;
      out.results["classic_clb_slope"] = classic_slope;
      AddCheck(&out.checks, "compressed_assembly_decays",
               std::abs(rate_slope + 0.5) <= 0.1, Detail({{"slope", rate_slope}}));
      AddCheck(&out.checks, "classic_clb_flat", std::abs(classic_slope) <= 0.1,
               Detail({{"slope", classic_slope}}));
    }
    out.csv.push_back({"counterexample.csv", csv.str()});
    return out;
  }

 private:
  Seed seed_;
  ProblemSpec problem_;
  DistributionSpec distribution_;
  CompressorSpec compressor_;
  McBudget budget_;
  std::vector<int> n_values_;
};

// ---------------------------------------------------------------------------

class SgldBound : public Experiment {
 public:
  SgldBound(Config& c, const Seed& seed) : seed_(seed) {
    problem_ = ParseProblem(c);
    distribution_ = ParseDistribution(c, problem_.dim, seed);
    n_ = c.Int("sgld", "n", 100);
    replicas_ = c.Int("sgld", "replicas", 50);
    const int d = c.Int("sgld", "d", 8);
    const int steps = c.Int("sgld", "T", 200);
    const int batch = c.Int("sgld", "b", 10);
    const double eta = c.Double("sgld", "eta", 0.05);
    const double sigma = c.Double("sgld", "sigma", 0.05);
    const double nu = c.Double("sgld", "nu", 1e-4);
    config_ = SgldConfig::Constant(d, steps, batch, eta, sigma, nu);
    const Problem problem = problem_.Build();
    config_.radius = c.Double("sgld", "radius", problem_.radius);
    config_.alpha = c.Double("sgld", "alpha", 1.0);
    config_.lipschitz = c.Double("sgld", "lipschitz", problem.LipschitzConstant());
    sgd_nu_grid_ = c.DoubleList("sgld", "sgd_nu_grid",
                                std::vector<double>{1e-4, 3e-4, 1e-3, 3e-3, 1e-2});
    const std::string convention = c.String("sgld", "q_convention", "immediate_past");
    if (convention == "all_past") {
      convention_ = QConvention::kAllPast;
    } else if (convention != "immediate_past") {
      ConfigFail("sgld.q_convention must be immediate_past or all_past");
    }
    if (replicas_ < 1) ConfigFail("sgld.replicas must be >= 1");
    if (d > problem_.dim) ConfigFail("sgld.d must not exceed problem.D");
    Validated("sgld", [&] {
      config_.Validate(n_);
      if (!problem.LossRange()) {
        throw Error(ErrorCode::kUnsupported, "loss range unknown");
      }
      return 0;
    });
    for (double v : sgd_nu_grid_) {
      if (!(v > 0.0)) ConfigFail("sgld.sgd_nu_grid entries must be > 0");
    }
  }

  std::string kind() const override { return "sgld-bound"; }

  ExperimentOutput Run(double fraction) const override {
    ExperimentOutput out;
    const Problem problem = problem_.Build();
    const DataDistribution mu = distribution_.Build();
    const int replicas = static_cast<int>(Scaled(replicas_, fraction, 2));
    std::ostringstream csv;
    csv.precision(17);
    csv << "# setting: sgld or sgd; nu: perturbation scale; gen: measured mean "
           "gap; lossless: lossless bound; rate/distortion/lossy: lossy bound "
           "terms\n";
    csv << "setting,nu,gen,gen_hw,lossless,rate_term,distortion_term,lossy_total\n";
    auto row = [&](const std::string& setting, double nu, const SgldExperiment& e) {
      csv << setting << ',' << nu << ',' << e.gen_gap.mean << ','
          << e.gen_gap.half_width << ',' << e.bounds.lossless.mean << ','
          << e.bounds.rate_term.mean << ',' << e.bounds.distortion_term << ','
          << e.bounds.lossy_total << '\n';
      return json{{"setting", setting},
                  {"nu", nu},
                  {"gen_gap", EstimateJson(e.gen_gap)},
                  {"bounds", e.bounds.ToJson()},
                  {"max_coupling_ratio", e.max_coupling_ratio},
                  {"replicas", e.replicas}};
    };

    const SgldExperiment main =
        RunSgldExperiment(config_, problem, mu, n_, replicas, seed_.Child(0), convention_);
    out.results["sgld"] = row("sgld", config_.nu.front(), main);
    AddCheck(&out.checks, "gen_gap_below_lossless",
             main.gen_gap.mean <= main.bounds.lossless.mean,
             Detail({{"gen", main.gen_gap.mean}, {"lossless", main.bounds.lossless.mean}}));
    AddCheck(&out.checks, "gen_gap_below_lossy",
             main.gen_gap.mean <= main.bounds.lossy_total,
             Detail({{"gen", main.gen_gap.mean}, {"lossy", main.bounds.lossy_total}}));
    AddCheck(&out.checks, "coupling_holds", main.max_coupling_ratio <= 1.0 + 1e-9,
             Detail({{"max_ratio", main.max_coupling_ratio}}));

    // Pure SGD: the lossless bound saturates while a tuned lossy bound stays
    // below it.
    json sgd_rows = json::array();
    double best_lossy = std::numeric_limits<double>::infinity();
    double best_nu = 0.0, sgd_lossless = 0.0;
    bool finite = true, flagged = true;
    for (size_t k = 0; k < sgd_nu_grid_.size(); ++k) {
      SgldConfig sgd = config_;
      sgd.sigma.assign(sgd.steps, 0.0);
      sgd.nu.assign(sgd.steps, sgd_nu_grid_[k]);
      const SgldExperiment e =
          RunSgldExperiment(sgd, problem, mu, n_, replicas, seed_.Child(1), convention_);
      sgd_rows.push_back(row("sgd", sgd_nu_grid_[k], e));
      sgd_lossless = e.bounds.lossless.mean;
      finite = finite && std::isfinite(e.bounds.lossy_total);
      flagged = flagged && e.bounds.sgd_mode;
      if (e.bounds.lossy_total < best_lossy) {
        best_lossy = e.bounds.lossy_total;
        best_nu = sgd_nu_grid_[k];
      }
    }
    out.results["sgd"] = {{"rows", sgd_rows},
                          {"lossless", sgd_lossless},
                          {"best_lossy", best_lossy},
                          {"best_nu", best_nu}};
    AddCheck(&out.checks, "sgd_lossy_finite_and_flagged", finite && flagged,
             Detail({{"best_lossy", best_lossy}}));
    AddCheck(&out.checks, "sgd_tuned_lossy_below_lossless", best_lossy < sgd_lossless,
             Detail({{"best_lossy", best_lossy}, {"lossless", sgd_lossless},
                     {"best_nu", best_nu}}));
    out.csv.push_back({"sgld.csv", csv.str()});
    return out;
  }

 private:
  Seed seed_;
  ProblemSpec problem_;
  DistributionSpec distribution_;
  SgldConfig config_;
  int n_, replicas_;
  std::vector<double> sgd_nu_grid_;
  QConvention convention_ = QConvention::kImmediatePast;
};

// ---------------------------------------------------------------------------

class RecallGame : public Experiment {
 public:
  RecallGame(Config& c, const Seed& seed) : seed_(seed) {
    mode_ = c.String("recall", "mode", "dummy");
    if (mode_ == "dummy") {
      n_ = c.Int("recall", "n", 20);
      trials_ = c.Int64("recall", "trials", 10000);
      alpha_ = c.Double("recall", "alpha", 0.0);
      r_ = c.Double("recall", "r", 0.9);
      feasible_ = c.Tuples("recall", "feasible", 4);
      infeasible_ = c.Tuples("recall", "infeasible", 4);
      Validated("recall", [&] { return MakeDummyAdversary(alpha_, r_); });
      for (const auto* list : {&feasible_, &infeasible_}) {
        for (const auto& t : *list) {
          Validated("recall tuple", [&] {
            return DummyFeasible(static_cast<int>(t[0]), t[1], t[2], static_cast<int>(t[3]));
          });
        }
      }
    } else if (mode_ == "frontier") {
      problem_ = ParseProblem(c);
      if (problem_.kind != "linear" && problem_.kind != "strongly_convex") {
        ConfigFail("frontier mode needs a linear or strongly_convex problem");
      }
      distribution_ = ParseDistribution(c, problem_.dim, seed);
      compressor_ = ParseCompressor(c, problem_.dim);
      n_values_ = c.IntList("recall", "n", std::vector<int>{32});
      RequirePositiveList(n_values_, "recall.n");
      trials_ = c.Int64("recall", "trials", 400);
      compressed_dims_ = c.IntList("recall", "compressed_dims", std::vector<int>{1});
      for (int d : compressed_dims_) {
        if (d < 1 || d > problem_.dim) ConfigFail("recall.compressed_dims out of range");
      }
      include_raw_ = c.Bool("recall", "include_raw", true);
      tau_lo_ = c.Double("recall", "tau_min", -0.5);
      tau_hi_ = c.Double("recall", "tau_max", 0.5);
      tau_count_ = c.Int("recall", "tau_count", 64);
      raw_soundness_ = c.Double("recall", "raw_max_soundness", 0.1);
      raw_min_q_ = c.Double("recall", "raw_min_q", 1.0 / 3.0);
      Validated("recall", [&] { return ThresholdGrid(tau_lo_, tau_hi_, tau_count_); });
    } else {
      ConfigFail("recall.mode must be dummy or frontier");
    }
    if (trials_ < 1) ConfigFail("recall.trials must be >= 1");
  }

  std::string kind() const override { return "recall-game"; }

  ExperimentOutput Run(double fraction) const override {
    return mode_ == "dummy" ? RunDummy(fraction) : RunFrontier(fraction);
  }

 private:
  ExperimentOutput RunDummy(double fraction) const {
    ExperimentOutput out;
    const int64_t trials = Scaled(trials_, fraction, 100);
    // The dummy ignores the model, so the cheapest release suffices.
    const DataDistribution mu = DataDistribution::Sphere(1);
    const ModelRelease release{[](const Dataset& s) { return Eigen::VectorXd::Zero(s.rows()); },
                               std::nullopt, "constant"};
    const DummyAdversary dummy{alpha_, r_};
    const TraceReport report =
        PlayRecallGame(release, mu, n_, Adversary(dummy), trials, seed_.Child(0));
    const DummyLaw law = DummyClosedForm(dummy, n_, 1);
    const double s = 1.0 - r_;
    const double second = (1.0 - alpha_) * (n_ * s * (1.0 - s) + n_ * n_ * s * s);
    const double recall_sd = std::sqrt(std::max(0.0, second - law.recall_mean * law.recall_mean));
    const double sound_sigma =
        std::sqrt(law.soundness * (1.0 - law.soundness) / static_cast<double>(trials));
    const double recall_sigma = recall_sd / std::sqrt(static_cast<double>(trials));
    out.results["calibration"] = {{"report", report.ToJson()},
                                  {"soundness_exact", law.soundness},
                                  {"recall_mean_exact", law.recall_mean}};
    AddCheck(&out.checks, "dummy_soundness_calibrated",
             std::abs(report.soundness.value - law.soundness) <= 3.0 * sound_sigma,
             Detail({{"simulated", report.soundness.value}, {"exact", law.soundness},
                     {"sigma", sound_sigma}}));
    AddCheck(&out.checks, "dummy_recall_mean_calibrated",
             std::abs(report.recall_mean.mean - law.recall_mean) <= 3.0 * recall_sigma,
             Detail({{"simulated", report.recall_mean.mean}, {"exact", law.recall_mean},
                     {"sigma", recall_sigma}}));

    json tuples = json::array();
    uint64_t index = 0;
    auto verify = [&](const std::vector<double>& t, bool expect_feasible) {
      const int m = static_cast<int>(t[0]);
      const double q = t[1], xi = t[2];
      const int n = static_cast<int>(t[3]);
      const FeasibilityResult feasible = DummyFeasible(m, q, xi, n);
      DummyAdversary tested = feasible.witness;
      double slack = 0.0;
      if (!feasible.feasible) {
        const DummySearch search = BestDummy(m, q, xi, n);
        tested = search.best;
        slack = search.slack;
      }
      const TraceReport sim = PlayRecallGame(release, mu, n, Adversary(tested), trials,
                                             seed_.Descend({1, index++}));
      const bool consistent = sim.ConsistentWithTracing(m, q, xi);
      const bool confirmed = expect_feasible
                                 ? feasible.feasible && consistent
                                 : !feasible.feasible && slack < 0.0 && !consistent;
      const std::string name = std::string(expect_feasible ? "feasible" : "infeasible") +
                               "[m=" + std::to_string(m) + ",q=" + FormatDouble(q) +
                               ",xi=" + FormatDouble(xi) + ",n=" + std::to_string(n) + "]";
      tuples.push_back({{"m", m}, {"q", q}, {"xi", xi}, {"n", n},
                        {"verdict", feasible.feasible},
                        {"route", static_cast<int>(feasible.route)},
                        {"tested_alpha", tested.alpha}, {"tested_r", tested.r},
                        {"best_slack", slack},
                        {"simulated_soundness", sim.soundness.value},
                        {"simulated_recall_probability", sim.RecallProbability(m).value},
                        {"consistent_with_tracing", consistent}});
      AddCheck(&out.checks, name, confirmed,
               Detail({{"soundness", sim.soundness.value},
                       {"recall_prob", sim.RecallProbability(m).value}}));
    };
    for (const auto& t : feasible_) verify(t, true);
    for (const auto& t : infeasible_) verify(t, false);
    out.results["feasibility"] = tuples;
    return out;
  }

  ExperimentOutput RunFrontier(double fraction) const {
    ExperimentOutput out;
    const Problem problem = problem_.Build();
    const DataDistribution mu = distribution_.Build();
    const Learner learner = ErmLearner(problem);
    const int64_t trials = Scaled(trials_, fraction, 20);
    const std::vector<double> taus = ThresholdGrid(tau_lo_, tau_hi_, tau_count_);
    std::vector<ModelRelease> releases;
    if (include_raw_) releases.push_back({learner, std::nullopt, "raw"});
    for (int d : compressed_dims_) {
      CompressorConfig cfg = compressor_.Resolve(1, problem_.dim);
      cfg.d = d;
      releases.push_back({learner, cfg, "compressed_d" + std::to_string(d)});
    }
    const std::vector<FrontierPoint> points =
        CompressedTracingProbe(releases, mu, n_values_, taus, trials, seed_.Child(0));
    std::ostringstream csv;
    WriteFrontierCsv(points, csv);
    out.csv.push_back({"frontier.csv", csv.str()});

    json summary = json::array();
    for (const ModelRelease& release : releases) {
      for (int n : n_values_) {
        std::vector<FrontierPoint> subset;
        for (const FrontierPoint& p : points) {
          if (p.release == release.label && p.n == n) subset.push_back(p);
        }
        const std::vector<FrontierPoint> violations = DichotomyViolations(subset);
        // Best P(recall >= n/2) among thresholds meeting the soundness cap.
        double best_q = 0.0, best_tau = std::numeric_limits<double>::quiet_NaN();
        for (const FrontierPoint& p : subset) {
          if (p.soundness.value <= raw_soundness_ && p.half_recall.value > best_q) {
            best_q = p.half_recall.value;
            best_tau = p.tau;
          }
        }
        summary.push_back({{"release", release.label},
                           {"n", n},
                           {"violations", violations.size()},
                           {"best_half_recall_at_soundness_cap", best_q},
                           {"best_tau", std::isnan(best_tau) ? json(nullptr) : json(best_tau)},
                           {"best_recall_rate_at_soundness_cap",
                            BestRecallAtSoundness(subset, raw_soundness_)}});
        const std::string tag = "[" + release.label + ",n=" + std::to_string(n) + "]";
        if (release.compressor) {
          AddCheck(&out.checks, "no_dichotomy_violation" + tag, violations.empty(),
                   Detail({{"violations", static_cast<double>(violations.size())}}));
        } else {
          AddCheck(&out.checks, "raw_model_traced" + tag, best_q >= raw_min_q_,
                   Detail({{"best_q", best_q}, {"best_tau", best_tau},
                           {"soundness_cap", raw_soundness_}}));
        }
      }
    }
    out.results["summary"] = summary;
    json pts = json::array();
    for (const FrontierPoint& p : points) {
      pts.push_back({{"release", p.release}, {"n", p.n}, {"d", p.d}, {"tau", p.tau},
                     {"recall_rate", p.recall_rate},
                     {"soundness", ProportionJson(p.soundness)},
                     {"half_recall", ProportionJson(p.half_recall)}});
    }
    out.results["points"] = pts;
    return out;
  }

  Seed seed_;
  std::string mode_;
  int n_ = 0;
  int64_t trials_ = 0;
  double alpha_ = 0.0, r_ = 0.0;
  std::vector<std::vector<double>> feasible_, infeasible_;
  ProblemSpec problem_;
  DistributionSpec distribution_;
  CompressorSpec compressor_;
  std::vector<int> n_values_, compressed_dims_;
  bool include_raw_ = true;
  double tau_lo_ = 0.0, tau_hi_ = 0.0;
  int tau_count_ = 0;
  double raw_soundness_ = 0.1, raw_min_q_ = 1.0 / 3.0;
};

}  // namespace

bool ExperimentOutput::AllPassed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

std::string FormatDouble(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::vector<std::pair<std::string, std::string>> ListExperiments() {
  return {
      {"moments-check", "Monte Carlo checks of the projection and dither moment formulas"},
      {"bound-curve", "assembled compressed-CMI bound and measured gap over a grid of n"},
      {"counterexample", "exact CMI of raw vs compressed ERM by 2^n enumeration"},
      {"sgld-bound", "lossless and lossy bounds for subspace SGLD and SGD"},
      {"recall-game", "dummy-adversary calibration or correlation-adversary frontier"},
      {"f-table", "mixture mutual information f(a, p) grid and its properties"},
  };
}

std::unique_ptr<Experiment> ParseExperiment(Config& config) {
  const std::string kind = config.String("", "experiment");
  const int64_t root = config.Int64("", "seed", 1);
  if (root < 0) ConfigFail("seed must be nonnegative");
  const Seed seed(static_cast<uint64_t>(root));
  std::unique_ptr<Experiment> experiment;
  if (kind == "moments-check") {
    experiment = std::make_unique<MomentsCheck>(config, seed);
  } else if (kind == "bound-curve") {
    experiment = std::make_unique<BoundCurve>(config, seed);
  } else if (kind == "counterexample") {
    experiment = std::make_unique<Counterexample>(config, seed);
  } else if (kind == "sgld-bound") {
    experiment = std::make_unique<SgldBound>(config, seed);
  } else if (kind == "recall-game") {
    experiment = std::make_unique<RecallGame>(config, seed);
  } else if (kind == "f-table") {
    experiment = std::make_unique<FTable>(config, seed);
  } else {
    throw Error(ErrorCode::kUsage, "unknown experiment kind '" + kind + "'");
  }
  config.RequireAllConsumed();
  return experiment;
}

}  // namespace pcmi
