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

#include "pcmi/bounds/bounds.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "pcmi/core/error.h"
#include "pcmi/core/parallel.h"

namespace pcmi {
namespace {

constexpr double kGroupTolerance = 1e-9;

nlohmann::json EstimateJson(const Estimate& e) {
  return {{"mean", e.mean}, {"half_width", e.half_width}, {"count", e.count}};
}

// Loss difference l(Z_{i,0}, v) - l(Z_{i,1}, v) for every row i.
Eigen::VectorXd LossGaps(const Problem& problem, const SuperSample& ss,
                         const Eigen::VectorXd& v) {
  Eigen::VectorXd gaps(ss.n());
  for (int i = 0; i < ss.n(); ++i) {
    gaps[i] = problem.Loss(v, ss.point(i, 0)) - problem.Loss(v, ss.point(i, 1));
  }
  return gaps;
}

// Runs fn(J, reconstructed model) over `inner` draws of (J, W_hat).
template <typename Fn>
void ForEachCompressedDraw(const SuperSample& ss, const Projection& theta,
                           const Learner& learner,
                           const CompressorConfig& config, int inner,
                           const Seed& seed, Fn&& fn) {
  Require(inner >= 1, ErrorCode::kParameter, "inner budget must be >= 1");
  Rng dither(seed.Child(1));
  for (int k = 0; k < inner; ++k) {
    const MembershipVector j = SampleMembership(ss.n(), seed.Descend({0, static_cast<uint64_t>(k)}));
    const Eigen::VectorXd w = learner(SelectTrain(ss, j));
    const CompressedHypothesis w_hat = Compress(theta, w, config, dither);
    fn(Reconstruct(theta, w_hat));
  }
}

}  // namespace

void McBudget::Validate() const {
  Require(outer >= 1 && inner >= 1, ErrorCode::kParameter,
          "Monte Carlo budget must be >= 1 in every dimension");
  Require(population_samples >= 2, ErrorCode::kParameter,
          "population risk budget must be >= 2");
}

McBudget McBudget::Scaled(double fraction) const {
  McBudget b = *this;
  b.outer = std::max(1, static_cast<int>(std::ceil(outer * fraction)));
  return b;
}

std::string BoundModeName(BoundMode mode) {
  switch (mode) {
    case BoundMode::kCompressed:
      return "compressed";
    case BoundMode::kSingleDatum:
      return "single_datum";
    case BoundMode::kClosedFormClb:
      return "closed_form_clb";
    case BoundMode::kClosedFormRate:
      return "closed_form_rate";
    case BoundMode::kClassicCmi:
      return "classic_cmi";
  }
  return "unknown";
}

nlohmann::json BoundReport::ToJson() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["mode"] = BoundModeName(mode);
  j["n"] = n;
  j["d"] = d;
  j["terms"] = {{"cmi_term", cmi_term},
                {"delta_ell", delta_ell.mean},
                {"rate_term", rate_term.mean},
                {"distortion", distortion.mean},
                {"epsilon", epsilon},
                {"total", total},
                {"gen_original", gen_original.mean},
                {"gen_compressed", gen_compressed.mean}};
  j["ci"] = {{"delta_ell", EstimateJson(delta_ell)},
             {"rate_term", EstimateJson(rate_term)},
             {"distortion", EstimateJson(distortion)},
             {"gen_original", EstimateJson(gen_original)},
             {"gen_compressed", EstimateJson(gen_compressed)}};
  if (!per_index_delta_ell.empty()) j["per_index_delta_ell"] = per_index_delta_ell;
  j["seeds"] = {{"root", budget.seed.ToString()}};
  j["budget"] = {{"outer", budget.outer},
                 {"inner", budget.inner},
                 {"population_samples", budget.population_samples}};
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

std::string BoundReport::CsvHeader() {
  return "mode,n,d,cmi_term,delta_ell,delta_ell_hw,rate_term,rate_term_hw,"
         "distortion,distortion_hw,epsilon,total,gen_original,gen_original_hw";
}

std::string BoundReport::CsvRow() const {
  std::ostringstream out;
  out.precision(17);
  out << BoundModeName(mode) << ',' << n << ',' << d << ',' << cmi_term << ','
      << delta_ell.mean << ',' << delta_ell.half_width << ',' << rate_term.mean
      << ',' << rate_term.half_width << ',' << distortion.mean << ','
      << distortion.half_width << ',' << epsilon << ',' << total << ','
      << gen_original.mean << ',' << gen_original.half_width;
  return out.str();
}

Estimate DeltaEllHat(const Problem& problem, const SuperSample& ss,
                     const Projection& theta, const Learner& learner,
                     const CompressorConfig& config, int inner,
                     const Seed& seed) {
  RunningStats stats;
  ForEachCompressedDraw(ss, theta, learner, config, inner, seed,
                        [&](const Eigen::VectorXd& model) {
                          stats.Add(LossGaps(problem, ss, model).squaredNorm() /
                                    ss.n());
                        });
  return stats.ToEstimate();
}

std::vector<double> DeltaEllPerIndex(const Problem& problem,
                                     const SuperSample& ss,
                                     const Projection& theta,
                                     const Learner& learner,
                                     const CompressorConfig& config, int inner,
                                     const Seed& seed) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(ss.n());
  ForEachCompressedDraw(ss, theta, learner, config, inner, seed,
                        [&](const Eigen::VectorXd& model) {
                          sums += LossGaps(problem, ss, model).cwiseAbs2();
                        });
  sums /= inner;
  return std::vector<double>(sums.data(), sums.data() + sums.size());
}

DistortionResult DistortionEstimate(const Problem& problem,
                                    const DataDistribution& mu,
                                    const Learner& learner,
                                    const CompressorConfig& config, int n,
                                    const McBudget& budget) {
  budget.Validate();
  config.Validate();
  struct Replica {
    double distortion, gen_original, gen_compressed;
  };
  const std::vector<Replica> replicas =
      ParallelMap(budget.outer, [&](int r) {
        const Seed base = budget.seed.Child(r);
        const Dataset s = SampleDataset(mu, n, base.Child(0));
        const Eigen::VectorXd w = learner(s);
        const Projection theta = Projection::Sample(mu.dim(), config, base.Child(1));
        Rng dither(base.Child(2));
        // Common population sample for both hypotheses when risk is not exact.
        const MonteCarloOptions mc{budget.population_samples, base.Child(3)};
        const double gen_w = GenError(problem, mu, s, w, mc).value;
        double gen_c = 0.0;
        for (int k = 0; k < budget.inner; ++k) {
          const CompressedHypothesis w_hat = Compress(theta, w, config, dither);
          gen_c += GenError(problem, mu, s, Reconstruct(theta, w_hat), mc).value;
        }
        gen_c /= budget.inner;
        return Replica{gen_w - gen_c, gen_w, gen_c};
      });
  RunningStats dist, orig, comp;
  for (const Replica& r : replicas) {
    dist.Add(r.distortion);
    orig.Add(r.gen_original);
    comp.Add(r.gen_compressed);
  }
  return {dist.ToEstimate(), orig.ToEstimate(), comp.ToEstimate()};
}

namespace {

BoundReport AssembleBound(BoundMode mode, const Problem& problem,
                          const DataDistribution& mu, const Learner& learner,
                          const CompressorConfig& config, int n,
                          const McBudget& budget) {
  budget.Validate();
  config.Validate();
  Require(n >= 1, ErrorCode::kParameter, "n must be >= 1");
  Require(mu.dim() == problem.dim(), ErrorCode::kShape,
          "distribution and problem dimensions differ");
  const double cap = CmiCap(config);
  const bool per_index = mode == BoundMode::kSingleDatum;
  struct Replica {
    double delta_ell, term;
    std::vector<double> per_index;
  };
  const Seed outer_seed = budget.seed.Child(0);
  const std::vector<Replica> replicas = ParallelMap(budget.outer, [&](int r) {
    const Seed base = outer_seed.Child(r);
    const SuperSample ss = SampleSuperSample(mu, n, base.Child(0));
    const Projection theta = Projection::Sample(mu.dim(), config, base.Child(1));
    Replica out;
    if (per_index) {
      out.per_index = DeltaEllPerIndex(problem, ss, theta, learner, config,
                                       budget.inner, base.Child(2));
      out.delta_ell = std::accumulate(out.per_index.begin(), out.per_index.end(), 0.0) / n;
      out.term = 0.0;
      for (double dl : out.per_index) out.term += std::sqrt(2.0 * dl * cap);
      out.term /= n;
    } else {
      out.delta_ell = DeltaEllHat(problem, ss, theta, learner, config,
                                  budget.inner, base.Child(2))
                          .mean;
      out.term = std::sqrt(2.0 * out.delta_ell * cap / n);
    }
    return out;
  });

  BoundReport report;
  report.mode = mode;
  report.n = n;
  report.d = config.d;
  report.cmi_term = cap;
  report.budget = budget;
  RunningStats dl, term;
  if (per_index) report.per_index_delta_ell.assign(n, 0.0);
  for (const Replica& r : replicas) {
    dl.Add(r.delta_ell);
    term.Add(r.term);
    for (int i = 0; i < static_cast<int>(r.per_index.size()); ++i) {
      report.per_index_delta_ell[i] += r.per_index[i] / budget.outer;
    }
  }
  report.delta_ell = dl.ToEstimate();
  report.rate_term = term.ToEstimate();

  McBudget distortion_budget = budget;
  distortion_budget.seed = budget.seed.Child(1);
  const DistortionResult dist =
      DistortionEstimate(problem, mu, learner, config, n, distortion_budget);
  report.distortion = dist.distortion;
  report.gen_original = dist.gen_original;
  report.gen_compressed = dist.gen_compressed;
  report.epsilon = dist.distortion.mean + dist.distortion.half_width;
  report.total = report.rate_term.mean + report.epsilon;
  if (per_index) {
    report.notes.push_back(
        "per-index CMI replaced by the global cap d log((c_w + nu) / nu)");
  }
  return report;
}

}  // namespace

BoundReport CompressedBound(const Problem& problem, const DataDistribution& mu,
                          const Learner& learner,
                          const CompressorConfig& config, int n,
                          const McBudget& budget) {
  return AssembleBound(BoundMode::kCompressed, problem, mu, learner, config, n,
                       budget);
}

BoundReport SingleDatumBound(const Problem& problem, const DataDistribution& mu,
                             const Learner& learner,
                             const CompressorConfig& config, int n,
                             const McBudget& budget) {
  return AssembleBound(BoundMode::kSingleDatum, problem, mu, learner, config,
                       n, budget);
}

double ClosedFormClb(double lipschitz, double radius, int n) {
  Require(lipschitz > 0 && radius > 0 && n >= 1, ErrorCode::kParameter,
          "closed-form bound needs positive L, R, n");
  return 8.0 * lipschitz * radius / std::sqrt(static_cast<double>(n));
}

double ClosedFormRate(const CompressorConfig& config, int n) {
  config.Validate();
  Require(n >= 1, ErrorCode::kParameter, "n must be >= 1");
  const double d = config.d;
  const double c = config.clip_radius, nu = config.dither_radius;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double gap = c * c - 1.0;
  const double rate =
      std::sqrt(8.0 * d * (c + nu) * (c + nu) * std::log((c + nu) / nu) / n);
  const double distortion = 2.0 / sqrt_n * std::pow(1.0 + 2.0 / d, 0.25) *
                            std::exp(-(0.21 / 4.0) * d * gap * gap);
  return rate + distortion;
}

ClassicCmiBounds ClassicCmiBound(double cmi, int n, double lipschitz,
                                 double radius) {
  Require(cmi >= 0.0, ErrorCode::kParameter, "CMI must be nonnegative");
  Require(n >= 1, ErrorCode::kParameter, "n must be >= 1");
  ClassicCmiBounds b;
  b.plain = std::sqrt(2.0 * cmi / n);
  b.clb = lipschitz * radius * std::sqrt(8.0 * cmi / n);
  return b;
}

namespace {

double EntropyOfCounts(const std::vector<int64_t>& counts, int64_t total) {
  double h = 0.0;
  for (int64_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return std::max(0.0, h);
}

// Groups vectors lying within `tol` of each other (transitively).
std::vector<int64_t> GroupWithinTolerance(const std::vector<Eigen::VectorXd>& outputs,
                                          double tol) {
  const int m = static_cast<int>(outputs.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return outputs[a][0] < outputs[b][0];
  });
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const Eigen::VectorXd& u = outputs[order[a]];
      const Eigen::VectorXd& v = outputs[order[b]];
      if (v[0] - u[0] > tol) break;
      if ((u - v).norm() <= tol) parent[find(order[a])] = find(order[b]);
    }
  }
  std::map<int, int64_t> sizes;
  for (int i = 0; i < m; ++i) ++sizes[find(i)];
  std::vector<int64_t> counts;
  for (const auto& [root, size] : sizes) counts.push_back(size);
  return counts;
}

void RequireEnumerable(const SuperSample& ss) {
  if (ss.n() > kMaxOracleN) {
    throw Error(ErrorCode::kCapacity,
                "exact CMI enumeration supports n <= " + std::to_string(kMaxOracleN));
  }
}

}  // namespace

CmiOracleResult ExactCmiOracle(const SuperSample& ss, const Learner& learner,
                               const CellQuantizer* quantizer) {
  RequireEnumerable(ss);
  const int n = ss.n();
  const int64_t total = int64_t{1} << n;
  CmiOracleResult result;
  result.memberships = total;
  std::vector<int64_t> counts;
  if (quantizer != nullptr) {
    std::map<std::vector<int>, int64_t> cells;
    for (int64_t code = 0; code < total; ++code) {
      const Eigen::VectorXi cell =
          (*quantizer)(learner(SelectTrain(ss, MembershipFromCode(n, code))));
      ++cells[std::vector<int>(cell.data(), cell.data() + cell.size())];
    }
    for (const auto& [cell, count] : cells) counts.push_back(count);
    result.grouping = "cell";
  } else {
    std::vector<Eigen::VectorXd> outputs;
    outputs.reserve(total);
    for (int64_t code = 0; code < total; ++code) {
      outputs.push_back(learner(SelectTrain(ss, MembershipFromCode(n, code))));
    }
    counts = GroupWithinTolerance(outputs, kGroupTolerance);
    result.grouping = "euclidean<=1e-9";
  }
  result.distinct_outputs = static_cast<int>(counts.size());
  result.cmi_nats = EntropyOfCounts(counts, total);
  return result;
}

CellQuantizer CompressedCellQuantizer(const Projection& theta,
                                      const CompressorConfig& config) {
  config.Validate();
  return [theta, config](const Eigen::VectorXd& w) {
    return LatticeCell(ClipProject(theta, w, config.clip_radius),
                       config.dither_radius);
  };
}

double DitheredMixtureCmi1D(std::span<const double> centers, double nu) {
  Require(!centers.empty(), ErrorCode::kParameter, "need at least one center");
  Require(nu > 0.0, ErrorCode::kParameter, "dither radius must be positive");
  // Breakpoints with +1 / -1 density increments.
  std::vector<std::pair<double, int>> events;
  events.reserve(2 * centers.size());
  for (double c : centers) {
    events.emplace_back(c - nu, +1);
    events.emplace_back(c + nu, -1);
  }
  std::sort(events.begin(), events.end());
  const double unit = 1.0 / (static_cast<double>(centers.size()) * 2.0 * nu);
  double entropy = 0.0;
  int active = 0;
  for (size_t e = 0; e + 1 < events.size(); ++e) {
    active += events[e].second;
    const double length = events[e + 1].first - events[e].first;
    if (active > 0 && length > 0.0) {
      const double density = active * unit;
      entropy -= length * density * std::log(density);
    }
  }
  return std::max(0.0, entropy - std::log(2.0 * nu));
}

double ExactCompressedCmi1D(const SuperSample& ss, const Learner& learner,
                            const Projection& theta,
                            const CompressorConfig& config) {
  RequireEnumerable(ss);
  config.Validate();
  Require(config.d == 1, ErrorCode::kParameter,
          "exact dithered CMI is implemented for d = 1");
  const int n = ss.n();
  const int64_t total = int64_t{1} << n;
  std::vector<double> centers(total);
  for (int64_t code = 0; code < total; ++code) {
    const Eigen::VectorXd w = learner(SelectTrain(ss, MembershipFromCode(n, code)));
    centers[code] = ClipProject(theta, w, config.clip_radius)[0];
  }
  return DitheredMixtureCmi1D(centers, config.dither_radius);
}

}  // namespace pcmi
