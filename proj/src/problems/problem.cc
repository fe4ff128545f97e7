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

#include "pcmi/problems/problem.h"

#include <cmath>
#include <sstream>

#include "pcmi/core/error.h"
#include "pcmi/core/stats.h"

namespace pcmi {
namespace {

void RequirePositive(double value, const char* name) {
  Require(std::isfinite(value) && value > 0.0, ErrorCode::kParameter,
          std::string(name) + " must be positive");
}

Eigen::VectorXd Feature(const GeneralizedLinearLoss& glm,
                        const Eigen::Ref<const Eigen::VectorXd>& z) {
  return glm.feature ? glm.feature(z) : Eigen::VectorXd(z);
}

double LinkPart(const GeneralizedLinearLoss& glm, const Eigen::VectorXd& w,
                const Eigen::VectorXd& z) {
  return glm.link(w.dot(Feature(glm, z)), z);
}

}  // namespace

GeneralizedLinearLoss LogisticLoss() {
  GeneralizedLinearLoss loss;
  loss.name = "logistic";
  loss.link = [](double t, const Eigen::VectorXd&) {
    return t > 0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
  };
  loss.link_derivative = [](double t, const Eigen::VectorXd&) {
    return -1.0 / (1.0 + std::exp(t));
  };
  return loss;
}

GeneralizedLinearLoss AbsoluteLoss() {
  GeneralizedLinearLoss loss;
  loss.name = "absolute";
  loss.link = [](double t, const Eigen::VectorXd&) { return std::abs(t); };
  loss.link_derivative = [](double t, const Eigen::VectorXd&) {
    return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
  };
  return loss;
}

Problem::Problem(Kind kind, int dim, double scale, double lambda, double radius)
    : kind_(kind), dim_(dim), scale_(scale), lambda_(lambda), radius_(radius) {
  Require(dim >= 1, ErrorCode::kParameter, "dimension must be >= 1");
  RequirePositive(radius, "radius R");
}

Problem Problem::Linear(int dim, double lipschitz, double radius) {
  RequirePositive(lipschitz, "Lipschitz constant L");
  return Problem(Kind::kLinear, dim, lipschitz, 0.0, radius);
}

Problem Problem::StronglyConvex(int dim, double lipschitz, double lambda,
                                double radius) {
  RequirePositive(lipschitz, "Lipschitz constant Lc");
  RequirePositive(lambda, "strong convexity lambda");
  return Problem(Kind::kStronglyConvex, dim, lipschitz, lambda, radius);
}

Problem Problem::Squared(int dim, double lipschitz, double radius) {
  RequirePositive(lipschitz, "Lipschitz constant L");
  return Problem(Kind::kSquared, dim, lipschitz, 0.0, radius);
}

Problem Problem::GeneralizedLinear(int dim, GeneralizedLinearLoss loss,
                                   double radius) {
  Require(static_cast<bool>(loss.link), ErrorCode::kParameter,
          "generalized linear loss needs a link function");
  RequirePositive(loss.link_lipschitz, "link Lipschitz constant");
  RequirePositive(loss.feature_bound, "feature bound B");
  Problem p(Kind::kGeneralizedLinear, dim, loss.link_lipschitz, 0.0, radius);
  p.glm_ = std::move(loss);
  return p;
}

std::string Problem::Describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kLinear:
      out << "linear(L=" << scale_;
      break;
    case Kind::kStronglyConvex:
      out << "strongly_convex(Lc=" << scale_ << ", lambda=" << lambda_;
      break;
    case Kind::kSquared:
      out << "squared(L=" << scale_;
      break;
    case Kind::kGeneralizedLinear:
      out << "generalized_linear(" << glm_.name << ", L=" << scale_
          << ", B=" << glm_.feature_bound;
      break;
  }
  out << ", R=" << radius_ << ", D=" << dim_ << ")";
  return out.str();
}

namespace {

void CheckShapes(const Eigen::VectorXd& w, const Eigen::Ref<const Eigen::VectorXd>& z,
                 int dim) {
  Require(w.size() == dim && z.size() == dim, ErrorCode::kShape,
          "hypothesis and data point must have dimension D");
}

}  // namespace

double Problem::Loss(const Eigen::VectorXd& w,
                     const Eigen::Ref<const Eigen::VectorXd>& z) const {
  CheckShapes(w, z, dim_);
  switch (kind_) {
    case Kind::kLinear:
      return -scale_ * w.dot(z);
    case Kind::kStronglyConvex:
      return -scale_ * w.dot(z) + 0.5 * lambda_ * w.squaredNorm();
    case Kind::kSquared:
      return -scale_ * (w - z).squaredNorm();
    case Kind::kGeneralizedLinear: {
      const Eigen::VectorXd zz = z;
      double value = LinkPart(glm_, w, zz);
      if (glm_.offset) value += glm_.offset(w);
      return value;
    }
  }
  return 0.0;
}

Eigen::VectorXd Problem::Gradient(
    const Eigen::VectorXd& w, const Eigen::Ref<const Eigen::VectorXd>& z) const {
  CheckShapes(w, z, dim_);
  switch (kind_) {
    case Kind::kLinear:
      return -scale_ * z;
    case Kind::kStronglyConvex:
      return -scale_ * z + lambda_ * w;
    case Kind::kSquared:
      return -2.0 * scale_ * (w - z);
    case Kind::kGeneralizedLinear: {
      Require(static_cast<bool>(glm_.link_derivative), ErrorCode::kUnsupported,
              "gradient needs the link derivative");
      const Eigen::VectorXd zz = z;
      const Eigen::VectorXd phi = Feature(glm_, zz);
      Eigen::VectorXd g = glm_.link_derivative(w.dot(phi), zz) * phi;
      if (glm_.offset_gradient) g += glm_.offset_gradient(w);
      return g;
    }
  }
  return Eigen::VectorXd();
}

double Problem::LipschitzConstant() const {
  switch (kind_) {
    case Kind::kLinear:
      return scale_;
    case Kind::kStronglyConvex:
      return scale_ + lambda_ * radius_;
    case Kind::kSquared:
      return 2.0 * scale_ * (radius_ + 1.0);
    case Kind::kGeneralizedLinear:
      return glm_.link_lipschitz * glm_.feature_bound + glm_.offset_lipschitz;
  }
  return 0.0;
}

std::optional<std::pair<double, double>> Problem::LossRange() const {
  switch (kind_) {
    case Kind::kLinear:
      return std::make_pair(-scale_ * radius_, scale_ * radius_);
    case Kind::kStronglyConvex:
      return std::make_pair(-scale_ * radius_,
                            scale_ * radius_ + 0.5 * lambda_ * radius_ * radius_);
    case Kind::kSquared:
      return std::make_pair(-scale_ * (radius_ + 1.0) * (radius_ + 1.0), 0.0);
    case Kind::kGeneralizedLinear:
      return glm_.loss_range;
  }
  return std::nullopt;
}

double EmpiricalRisk(const Problem& problem, const Dataset& data,
                     const Eigen::VectorXd& w) {
  Require(data.cols() >= 1, ErrorCode::kParameter,
          "empirical risk of an empty dataset");
  Require(data.rows() == problem.dim() && w.size() == problem.dim(),
          ErrorCode::kShape, "dimension mismatch in empirical risk");
  switch (problem.kind()) {
    case Problem::Kind::kLinear:
    case Problem::Kind::kStronglyConvex:
      // Linear in z: evaluate at the sample mean.
      return problem.Loss(w, data.rowwise().mean());
    default: {
      double total = 0.0;
      for (Eigen::Index i = 0; i < data.cols(); ++i) {
        total += problem.Loss(w, data.col(i));
      }
      return total / static_cast<double>(data.cols());
    }
  }
}

RiskValue PopulationRisk(const Problem& problem, const DataDistribution& mu,
                         const Eigen::VectorXd& w, const MonteCarloOptions& mc) {
  Require(mu.dim() == problem.dim() && w.size() == problem.dim(),
          ErrorCode::kShape, "dimension mismatch in population risk");
  RiskValue risk;
  switch (problem.kind()) {
    case Problem::Kind::kLinear:
    case Problem::Kind::kStronglyConvex:
      risk.value = problem.Loss(w, mu.Mean());
      return risk;
    case Problem::Kind::kSquared:
      risk.value = -problem.scale() * (w.squaredNorm() -
                                       2.0 * w.dot(mu.Mean()) +
                                       mu.SecondMoment());
      return risk;
    case Problem::Kind::kGeneralizedLinear:
      break;
  }
  Require(mc.samples >= 2, ErrorCode::kParameter,
          "Monte Carlo risk needs at least two samples");
  Rng rng(mc.seed);
  RunningStats stats;
  Eigen::VectorXd z(mu.dim());
  for (int64_t s = 0; s < mc.samples; ++s) {
    mu.Sample(rng, z);
    stats.Add(problem.Loss(w, z));
  }
  const Estimate e = stats.ToEstimate();
  risk.value = e.mean;
  risk.half_width = e.half_width;
  risk.exact = false;
  risk.samples = mc.samples;
  risk.seed = mc.seed;
  return risk;
}

RiskValue GenError(const Problem& problem, const DataDistribution& mu,
                   const Dataset& data, const Eigen::VectorXd& w,
                   const MonteCarloOptions& mc) {
  RiskValue risk = PopulationRisk(problem, mu, w, mc);
  risk.value -= EmpiricalRisk(problem, data, w);
  return risk;
}

Eigen::VectorXd ProjectToBall(const Eigen::VectorXd& w, double radius) {
  const double norm = w.norm();
  if (norm <= radius) return w;
  return w * (radius / norm);
}

Eigen::VectorXd ErmLinear(const Problem& problem, const Dataset& data) {
  Require(data.cols() >= 1, ErrorCode::kParameter, "ERM on an empty dataset");
  Require(data.rows() == problem.dim(), ErrorCode::kShape,
          "dimension mismatch in ERM");
  const Eigen::VectorXd zbar = data.rowwise().mean();
  const double norm = zbar.norm();
  switch (problem.kind()) {
    case Problem::Kind::kLinear:
      if (norm == 0.0) return Eigen::VectorXd::Zero(problem.dim());
      return zbar * (problem.radius() / norm);
    case Problem::Kind::kStronglyConvex:
      return ProjectToBall(zbar * (problem.scale() / problem.lambda()),
                           problem.radius());
    default:
      throw Error(ErrorCode::kUnsupported,
                  "closed-form ERM is defined for linear and strongly convex "
                  "losses only");
  }
}

Eigen::VectorXd ProjectedGradientDescent(const Problem& problem,
                                         const Dataset& data,
                                         const GradientDescentOptions& options) {
  Require(data.cols() >= 1, ErrorCode::kParameter, "PGD on an empty dataset");
  Require(options.steps >= 0 && options.step_size > 0.0, ErrorCode::kParameter,
          "PGD needs steps >= 0 and a positive step size");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(problem.dim());
  const double inv_n = 1.0 / static_cast<double>(data.cols());
  for (int t = 0; t < options.steps; ++t) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(problem.dim());
    for (Eigen::Index i = 0; i < data.cols(); ++i) {
      grad += problem.Gradient(w, data.col(i));
    }
    w = ProjectToBall(w - options.step_size * inv_n * grad, problem.radius());
  }
  return w;
}

Learner ErmLearner(const Problem& problem) {
  // Validate support eagerly so misuse surfaces at construction.
  Require(problem.kind() == Problem::Kind::kLinear ||
              problem.kind() == Problem::Kind::kStronglyConvex,
          ErrorCode::kUnsupported,
          "closed-form ERM is defined for linear and strongly convex losses "
          "only");
  return [problem](const Dataset& data) { return ErmLinear(problem, data); };
}

Learner GradientDescentLearner(const Problem& problem,
                               const GradientDescentOptions& options) {
  return [problem, options](const Dataset& data) {
    return ProjectedGradientDescent(problem, data, options);
  };
}

double AuditLipschitz(const Problem& problem, const DataDistribution& mu,
                      int probes, const Seed& seed) {
  const GeneralizedLinearLoss* glm = problem.generalized();
  Require(glm != nullptr, ErrorCode::kUnsupported,
          "Lipschitz audit applies to generalized linear losses");
  Require(probes >= 1, ErrorCode::kParameter, "need at least one probe");
  Rng rng(seed);
  const int dim = problem.dim();
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Eigen::VectorXd z = mu.Sample(rng);
    const double feature_norm = Feature(*glm, z).norm();
    Require(feature_norm <= glm->feature_bound * (1.0 + 1e-12),
            ErrorCode::kParameter, "feature norm exceeds the claimed bound B");
    Eigen::VectorXd w1(dim), w2(dim);
    for (int k = 0; k < dim; ++k) {
      w1[k] = rng.Normal();
      w2[k] = rng.Normal();
    }
    w1 = ProjectToBall(w1, problem.radius() * rng.Uniform());
    w2 = ProjectToBall(w2, problem.radius() * rng.Uniform());
    const double dw = (w1 - w2).norm();
    if (dw == 0.0) continue;
    const double ratio = std::abs(LinkPart(*glm, w1, z) - LinkPart(*glm, w2, z)) /
                         (glm->feature_bound * dw);
    worst = std::max(worst, ratio);
  }
  Require(worst <= glm->link_lipschitz * (1.0 + 1e-9), ErrorCode::kParameter,
          "link violates its claimed Lipschitz constant on probes");
  return worst;
}

}  // namespace pcmi
