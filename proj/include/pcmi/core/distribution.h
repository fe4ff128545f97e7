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

#ifndef PCMI_CORE_DISTRIBUTION_H_
#define PCMI_CORE_DISTRIBUTION_H_

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pcmi/core/random.h"
#include "pcmi/core/seed.h"

namespace pcmi {

// Product distribution on the scaled hypercube {-1/sqrt(D), +1/sqrt(D)}^D with
// P(z_k = +1/sqrt(D)) = (1 + p_k) / 2.
struct CubeParams {
  Eigen::VectorXd p_star;
};

// Finitely supported distribution over points in the unit ball.
struct FiniteSupportParams {
  std::vector<Eigen::VectorXd> atoms;
  std::vector<double> weights;
};

// Uniform distribution on the unit sphere in R^D.
struct SphereParams {
  int dim = 0;
};

// Data distribution over the unit ball B_D(1). Construct with the static
// factories, which validate their arguments.
class DataDistribution {
 public:
  enum class Kind { kCube, kFiniteSupport, kSphere };

  static DataDistribution Cube(Eigen::VectorXd p_star);
  static DataDistribution FiniteSupport(std::vector<Eigen::VectorXd> atoms,
                                        std::vector<double> weights);
  static DataDistribution Sphere(int dim);

  Kind kind() const;
  int dim() const;
  std::string Describe() const;

  // E[Z].
  const Eigen::VectorXd& Mean() const { return mean_; }
  // E[||Z||^2].
  double SecondMoment() const { return second_moment_; }

  // Writes one draw into `out` (resized to dim()).
  void Sample(Rng& rng, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd Sample(Rng& rng) const;

  const CubeParams* cube() const { return std::get_if<CubeParams>(&params_); }
  const FiniteSupportParams* finite() const {
    return std::get_if<FiniteSupportParams>(&params_);
  }

 private:
  using Params = std::variant<CubeParams, FiniteSupportParams, SphereParams>;
  explicit DataDistribution(Params params);

  Params params_;
  Eigen::VectorXd mean_;
  double second_moment_ = 0.0;
  // Cube: P(+) per coordinate. Finite support: cumulative weights.
  std::vector<double> table_;
};

// Draws p* uniformly from [-scale, scale]^D. Requires 0 <= scale <= 1.
Eigen::VectorXd RandomCubeParameters(int dim, double scale, const Seed& seed);

}  // namespace pcmi

#endif  // PCMI_CORE_DISTRIBUTION_H_
