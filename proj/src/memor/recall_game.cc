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

#include "pcmi/memor/recall_game.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/binomial.hpp>

#include "pcmi/core/error.h"
#include "pcmi/core/parallel.h"
#include "pcmi/core/sample.h"

namespace pcmi {
namespace {

constexpr double kAlphaStep = 1e-3;

// Per-trial outcome for one adversary.
struct Outcome {
  bool ghost_flagged = false;
  int recall = 0;
};

class TrialPlayer {
 public:
  TrialPlayer(const Eigen::VectorXd& model, const SuperSample& ss)
      : model_(model), ss_(ss) {}

  Outcome Play(const Adversary& adversary, Rng& rng) {
    Outcome out;
    const int n = ss_.n();
    if (const auto* dummy = std::get_if<DummyAdversary>(&adversary)) {
      const bool silent = rng.Uniform() < dummy->alpha;
      for (int col = 0; col < 2; ++col) {
        for (int i = 0; i < n; ++i) {
          const bool guess = !silent && !(rng.Uniform() < dummy->r);
          Record(col, guess, &out);
        }
      }
      return out;
    }
    const double tau = std::get<CorrelationAdversary>(adversary).tau;
    const Eigen::MatrixXd& scores = Scores();
    for (int col = 0; col < 2; ++col) {
      for (int i = 0; i < n; ++i) Record(col, scores(i, col) >= tau, &out);
    }
    return out;
  }

 private:
  static void Record(int col, bool guess, Outcome* out) {
    if (!guess) return;
    if (col == 0) {
      out->ghost_flagged = true;
    } else {
      ++out->recall;
    }
  }

  // Normalized correlations, computed once per trial.
  const Eigen::MatrixXd& Scores() {
    if (scores_.size() == 0) {
      const double norm = model_.norm();
      scores_.resize(ss_.n(), 2);
      for (int col = 0; col < 2; ++col) {
        const Eigen::VectorXd dots = ss_.column(col).transpose() * model_;
        scores_.col(col) = norm > 0.0 ? Eigen::VectorXd(dots / norm)
                                      : Eigen::VectorXd::Zero(ss_.n());
      }
    }
    return scores_;
  }

  const Eigen::VectorXd& model_;
  const SuperSample& ss_;
  Eigen::MatrixXd scores_;
};

double BinomialUpperTail(int n, double success, int m) {
  if (m <= 0) return 1.0;
  if (m > n) return 0.0;
  if (success <= 0.0) return 0.0;
  if (success >= 1.0) return 1.0;
  boost::math::binomial_distribution<double> dist(n, success);
  return boost::math::cdf(boost::math::complement(dist, m - 1));
}

std::string FormatDouble(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

}  // namespace

Adversary MakeDummyAdversary(double alpha, double r) {
  Require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::kParameter,
          "dummy alpha must lie in [0, 1]");
  Require(r >= 0.0 && r <= 1.0, ErrorCode::kParameter,
          "dummy r must lie in [0, 1]");
  return DummyAdversary{alpha, r};
}

Adversary MakeCorrelationAdversary(double tau) {
  Require(std::isfinite(tau), ErrorCode::kParameter, "tau must be finite");
  return CorrelationAdversary{tau};
}

std::string DescribeAdversary(const Adversary& adversary) {
  if (const auto* dummy = std::get_if<DummyAdversary>(&adversary)) {
    return "dummy(alpha=" + FormatDouble(dummy->alpha) +
           ", r=" + FormatDouble(dummy->r) + ")";
  }
  return "correlation(tau=" +
         FormatDouble(std::get<CorrelationAdversary>(adversary).tau) + ")";
}

std::vector<Adversary> CorrelationFamily(std::span<const double> taus) {
  std::vector<Adversary> family;
  family.reserve(taus.size());
  for (double tau : taus) family.push_back(MakeCorrelationAdversary(tau));
  return family;
}

std::vector<double> ThresholdGrid(double lo, double hi, int count) {
  Require(count >= 1 && lo <= hi, ErrorCode::kParameter,
          "threshold grid needs count >= 1 and lo <= hi");
  std::vector<double> grid(count);
  for (int k = 0; k < count; ++k) {
    grid[k] = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
  }
  return grid;
}

Proportion TraceReport::RecallProbability(int m) const {
  int64_t hits = 0;
  for (int k = std::max(0, m); k < static_cast<int>(recall_histogram.size()); ++k) {
    hits += recall_histogram[k];
  }
  return WilsonInterval(hits, trials);
}

bool TraceReport::ConsistentWithTracing(int m, double q, double xi) const {
  const Proportion recall = RecallProbability(m);
  return soundness.lower <= xi && recall.upper >= q;
}

nlohmann::json TraceReport::ToJson() const {
  return {{"adversary", adversary},
          {"n", n},
          {"trials", trials},
          {"soundness",
           {{"value", soundness.value},
            {"lower", soundness.lower},
            {"upper", soundness.upper}}},
          {"recall_mean",
           {{"mean", recall_mean.mean}, {"half_width", recall_mean.half_width}}},
          {"recall_histogram", recall_histogram}};
}

std::vector<TraceReport> PlayRecallGame(const ModelRelease& release,
                                        const DataDistribution& mu, int n,
                                        std::span<const Adversary> adversaries,
                                        int64_t trials, const Seed& seed) {
  Require(trials >= 1, ErrorCode::kParameter, "recall game needs trials >= 1");
  Require(n >= 1, ErrorCode::kParameter, "recall game needs n >= 1");
  Require(!adversaries.empty(), ErrorCode::kParameter, "no adversaries given");
  Require(static_cast<bool>(release.learner), ErrorCode::kParameter,
          "model release needs a learner");
  if (release.compressor) release.compressor->Validate();
  const int count = static_cast<int>(adversaries.size());

  const std::vector<std::vector<Outcome>> outcomes =
      ParallelMap(static_cast<int>(trials), [&](int t) {
        const Seed base = seed.Child(t);
        const SuperSample ss = SampleSuperSample(mu, n, base.Child(0));
        // Column 1 holds the training members.
        Eigen::VectorXd model = release.learner(ss.column(1));
        if (release.compressor) {
          const Projection theta =
              Projection::Sample(mu.dim(), *release.compressor, base.Child(1));
          Rng dither(base.Child(2));
          model = Reconstruct(theta, Compress(theta, model, *release.compressor, dither));
        }
        TrialPlayer player(model, ss);
        std::vector<Outcome> row(count);
        for (int a = 0; a < count; ++a) {
          Rng rng(base.Descend({3, static_cast<uint64_t>(a)}));
          row[a] = player.Play(adversaries[a], rng);
        }
        return row;
      });

  std::vector<TraceReport> reports(count);
  for (int a = 0; a < count; ++a) {
    TraceReport& report = reports[a];
    report.n = n;
    report.trials = trials;
    report.adversary = DescribeAdversary(adversaries[a]);
    report.recall_histogram.assign(n + 1, 0);
    int64_t flagged = 0;
    RunningStats recall;
    for (const auto& row : outcomes) {
      flagged += row[a].ghost_flagged ? 1 : 0;
      ++report.recall_histogram[row[a].recall];
      recall.Add(row[a].recall);
    }
    report.soundness = WilsonInterval(flagged, trials);
    report.recall_mean = recall.ToEstimate();
  }
  return reports;
}

TraceReport PlayRecallGame(const ModelRelease& release,
                           const DataDistribution& mu, int n,
                           const Adversary& adversary, int64_t trials,
                           const Seed& seed) {
  return PlayRecallGame(release, mu, n, std::span<const Adversary>(&adversary, 1),
                        trials, seed)
      .front();
}

DummyLaw DummyClosedForm(const DummyAdversary& dummy, int n, int m) {
  Require(n >= 1 && m >= 0 && m <= n, ErrorCode::kParameter,
          "need n >= 1 and 0 <= m <= n");
  const double active = 1.0 - dummy.alpha;
  DummyLaw law;
  law.soundness = active * (1.0 - std::pow(dummy.r, n));
  law.recall_probability =
      m == 0 ? 1.0 : active * BinomialUpperTail(n, 1.0 - dummy.r, m);
  law.recall_mean = active * n * (1.0 - dummy.r);
  return law;
}

FeasibilityResult DummyFeasible(int m, double q, double xi, int n) {
  Require(n >= 1 && m >= 0 && m <= n, ErrorCode::kParameter,
          "need n >= 1 and 0 <= m <= n");
  Require(q >= 0.0 && q <= 1.0 && xi >= 0.0 && xi <= 1.0, ErrorCode::kParameter,
          "q and xi must lie in [0, 1]");
  FeasibilityResult result;
  if (m == 0) {
    result.feasible = true;
    result.route = FeasibilityRoute::kZeroRecall;
    result.witness = {1.0, 1.0};
    return result;
  }
  if (xi >= q) {
    result.feasible = true;
    result.route = FeasibilityRoute::kSoundnessCover;
    result.witness = {1.0 - xi, 0.0};
    return result;
  }
  const double m_rate = static_cast<double>(m) / n;
  const int steps = static_cast<int>(std::floor((1.0 - xi) / kAlphaStep + 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double alpha = k * kAlphaStep;
    if (alpha >= 1.0) break;
    const double active = 1.0 - alpha;
    if (q >= active) break;  // q / (1 - alpha) >= 1 only grows with alpha.
    const double sound_term = std::pow(std::max(0.0, 1.0 - xi / active), 1.0 / n);
    const double hoeffding =
        std::sqrt(std::log(1.0 / (1.0 - q / active)) / (2.0 * n));
    if (sound_term + hoeffding + m_rate <= 1.0) {
      result.feasible = true;
      result.route = FeasibilityRoute::kHoeffding;
      result.witness = {alpha, 1.0 - m_rate - hoeffding};
      return result;
    }
  }
  return result;
}

DummySearch BestDummy(int m, double q, double xi, int n, int grid) {
  Require(grid >= 1, ErrorCode::kParameter, "grid must be >= 1");
  DummySearch best;
  best.slack = -std::numeric_limits<double>::infinity();
  for (int ia = 0; ia <= grid; ++ia) {
    for (int ir = 0; ir <= grid; ++ir) {
      const DummyAdversary dummy{static_cast<double>(ia) / grid,
                                 static_cast<double>(ir) / grid};
      const DummyLaw law = DummyClosedForm(dummy, n, m);
      const double slack =
          std::min(xi - law.soundness, law.recall_probability - q);
      if (slack > best.slack) best = {dummy, slack};
    }
  }
  return best;
}

std::vector<FrontierPoint> CompressedTracingProbe(
    std::span<const ModelRelease> releases, const DataDistribution& mu,
    std::span<const int> n_grid, std::span<const double> taus, int64_t trials,
    const Seed& seed) {
  const std::vector<Adversary> family = CorrelationFamily(taus);
  std::vector<FrontierPoint> points;
  for (size_t g = 0; g < n_grid.size(); ++g) {
    const int n = n_grid[g];
    for (size_t r = 0; r < releases.size(); ++r) {
      const std::vector<TraceReport> reports = PlayRecallGame(
          releases[r], mu, n, family, trials, seed.Descend({g, r}));
      const int d = releases[r].compressor ? releases[r].compressor->d : mu.dim();
      for (size_t a = 0; a < family.size(); ++a) {
        FrontierPoint p;
        p.release = releases[r].label;
        p.n = n;
        p.d = d;
        p.tau = taus[a];
        p.recall_rate = reports[a].recall_mean.mean / n;
        p.soundness = reports[a].soundness;
        p.half_recall = reports[a].RecallProbability((n + 1) / 2);
        points.push_back(p);
      }
    }
  }
  return points;
}

std::vector<FrontierPoint> DichotomyViolations(
    std::span<const FrontierPoint> points) {
  std::vector<FrontierPoint> violations;
  for (const FrontierPoint& p : points) {
    if (p.half_recall.value <= 0.0) continue;
    const double se = std::hypot(p.half_recall.std_error(), p.soundness.std_error());
    if (p.soundness.value < p.half_recall.value - 2.0 * se) violations.push_back(p);
  }
  return violations;
}

double BestRecallAtSoundness(std::span<const FrontierPoint> points,
                             double max_soundness) {
  double best = 0.0;
  for (const FrontierPoint& p : points) {
    if (p.soundness.value <= max_soundness) best = std::max(best, p.recall_rate);
  }
  return best;
}

void WriteFrontierCsv(std::span<const FrontierPoint> points, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "# release: model label; n: sample size; d: released dimension; tau: "
         "correlation threshold; recall_rate: E[recall]/n; soundness: "
         "P(any ghost flagged); half_recall: P(recall >= n/2)\n";
  out << "release,n,d,tau,recall_rate,soundness,soundness_lower,"
         "soundness_upper,half_recall,half_recall_lower,half_recall_upper\n";
  for (const FrontierPoint& p : points) {
    out << p.release << ',' << p.n << ',' << p.d << ',' << p.tau << ','
        << p.recall_rate << ',' << p.soundness.value << ',' << p.soundness.lower
        << ',' << p.soundness.upper << ',' << p.half_recall.value << ','
        << p.half_recall.lower << ',' << p.half_recall.upper << '\n';
  }
  out.precision(old_precision);
}

}  // namespace pcmi
