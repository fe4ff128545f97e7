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

#ifndef PCMI_PROBLEMS_PROBLEM_H_
#define PCMI_PROBLEMS_PROBLEM_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "pcmi/core/distribution.h"
#include "pcmi/core/sample.h"
#include "pcmi/core/seed.h"

namespace pcmi {

// Loss of the form g(<w, phi(z)>, z) + r(w), where g is Lipschitz in its first
// argument and ||phi(z)|| <= feature_bound. `link_lipschitz` is a claim that
// AuditLipschitz can check on random probes.
struct GeneralizedLinearLoss {
  std::string name;
  std::function<double(double t, const Eigen::VectorXd& z)> link;
  // d/dt of the link; needed only for gradient-based learners.
  std::function<double(double t, const Eigen::VectorXd& z)> link_derivative;
  // Feature map; identity when empty.
  std::function<Eigen::VectorXd(const Eigen::VectorXd& z)> feature;
  // Data-independent offset r(w) and its gradient; zero when empty.
  std::function<double(const Eigen::VectorXd& w)> offset;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& w)> offset_gradient;
  double link_lipschitz = 1.0;
  double feature_bound = 1.0;
  double offset_lipschitz = 0.0;
  // Bounds on the loss over the admissible set, if known.
  std::optional<std::pair<double, double>> loss_range;
};

// g(t) = log(1 + exp(-t)), phi = identity. 1-Lipschitz with B = 1.
GeneralizedLinearLoss LogisticLoss();
// g(t) = |t|, phi = identity.
GeneralizedLinearLoss AbsoluteLoss();

// A stochastic convex optimization instance on the ball B_D(R) with data in
// the unit ball.
class Problem {
 public:
  enum class Kind { kLinear, kStronglyConvex, kSquared, kGeneralizedLinear };

  // l(w, z) = -L <w, z>.
  static Problem Linear(int dim, double lipschitz, double radius);
  // l(w, z) = -Lc <w, z> + (lambda / 2) ||w||^2.
  static Problem StronglyConvex(int dim, double lipschitz, double lambda,
                                double radius);
  // l(w, z) = -L ||w - z||^2.
  static Problem Squared(int dim, double lipschitz, double radius);
  static Problem GeneralizedLinear(int dim, GeneralizedLinearLoss loss,
                                   double radius);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double radius() const { return radius_; }
  // Scale L (or Lc) of the data-dependent term.
  double scale() const { return scale_; }
  double lambda() const { return lambda_; }
  const GeneralizedLinearLoss* generalized() const {
    return kind_ == Kind::kGeneralizedLinear ? &glm_ : nullptr;
  }
  std::string Describe() const;

  double Loss(const Eigen::VectorXd& w,
              const Eigen::Ref<const Eigen::VectorXd>& z) const;
  // Gradient of w -> l(w, z).
  Eigen::VectorXd Gradient(const Eigen::VectorXd& w,
                           const Eigen::Ref<const Eigen::VectorXd>& z) const;

  // Lipschitz constant of w -> l(w, z) on B_D(R), uniformly over ||z|| <= 1.
  double LipschitzConstant() const;
  // [min, max] of the loss over B_D(R) x B_D(1), when known.
  std::optional<std::pair<double, double>> LossRange() const;

 private:
  Problem(Kind kind, int dim, double scale, double lambda, double radius);

  Kind kind_;
  int dim_;
  double scale_;
  double lambda_;
  double radius_;
  GeneralizedLinearLoss glm_;
};

// A risk value, either exact or a Monte Carlo estimate with its 95%
// half-width, the number of samples and the seed that produced it.
struct RiskValue {
  double value = 0.0;
  double half_width = 0.0;
  bool exact = true;
  int64_t samples = 0;
  std::optional<Seed> seed;
};

struct MonteCarloOptions {
  int64_t samples = 100000;
  Seed seed = Seed(0);
};

double EmpiricalRisk(const Problem& problem, const Dataset& data,
                     const Eigen::VectorXd& w);
// Exact through E[Z] and E||Z||^2 for the linear, strongly convex and squared
// kinds; Monte Carlo otherwise.
RiskValue PopulationRisk(const Problem& problem, const DataDistribution& mu,
                         const Eigen::VectorXd& w,
                         const MonteCarloOptions& mc = {});
// Population risk minus empirical risk.
RiskValue GenError(const Problem& problem, const DataDistribution& mu,
                   const Dataset& data, const Eigen::VectorXd& w,
                   const MonteCarloOptions& mc = {});

// Empirical risk minimizer for the linear kind (R zbar / ||zbar||) and the
// strongly convex kind ((Lc / lambda) zbar clipped to B_D(R)). Returns zero
// when zbar = 0.
Eigen::VectorXd ErmLinear(const Problem& problem, const Dataset& data);

struct GradientDescentOptions {
  int steps = 100;
  double step_size = 0.5;
};
// Full-batch projected gradient descent from the origin.
Eigen::VectorXd ProjectedGradientDescent(const Problem& problem,
                                         const Dataset& data,
                                         const GradientDescentOptions& options);

// Radial projection onto B(radius).
Eigen::VectorXd ProjectToBall(const Eigen::VectorXd& w, double radius);

// A deterministic learning algorithm.
using Learner = std::function<Eigen::VectorXd(const Dataset&)>;
Learner ErmLearner(const Problem& problem);
Learner GradientDescentLearner(const Problem& problem,
                               const GradientDescentOptions& options);

// Largest observed |g(<w1, phi>) - g(<w2, phi>)| / (B ||w1 - w2||) over
// random probes. Throws Error(kParameter) when it exceeds the claimed link
// Lipschitz constant.
double AuditLipschitz(const Problem& problem, const DataDistribution& mu,
                      int probes, const Seed& seed);

}  // namespace pcmi

#endif  // PCMI_PROBLEMS_PROBLEM_H_
