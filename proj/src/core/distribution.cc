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

#include "pcmi/core/distribution.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pcmi/core/error.h"

namespace pcmi {
namespace {

constexpr double kWeightTolerance = 1e-12;
constexpr double kNormTolerance = 1e-12;

}  // namespace

DataDistribution::DataDistribution(Params params) : params_(std::move(params)) {
  if (const auto* cube = std::get_if<CubeParams>(&params_)) {
    const int dim = static_cast<int>(cube->p_star.size());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    mean_ = cube->p_star * scale;
    second_moment_ = 1.0;
    table_.resize(dim);
    for (int k = 0; k < dim; ++k) table_[k] = 0.5 * (1.0 + cube->p_star[k]);
  } else if (const auto* fin = std::get_if<FiniteSupportParams>(&params_)) {
    const int dim = static_cast<int>(fin->atoms.front().size());
    mean_ = Eigen::VectorXd::Zero(dim);
    double cumulative = 0.0;
    for (size_t a = 0; a < fin->atoms.size(); ++a) {
      mean_ += fin->weights[a] * fin->atoms[a];
      second_moment_ += fin->weights[a] * fin->atoms[a].squaredNorm();
      cumulative += fin->weights[a];
      table_.push_back(cumulative);
    }
  } else {
    const int dim = std::get<SphereParams>(params_).dim;
    mean_ = Eigen::VectorXd::Zero(dim);
    second_moment_ = 1.0;
  }
}

DataDistribution DataDistribution::Cube(Eigen::VectorXd p_star) {
  Require(p_star.size() >= 1, ErrorCode::kParameter, "cube needs D >= 1");
  for (Eigen::Index k = 0; k < p_star.size(); ++k) {
    Require(std::isfinite(p_star[k]) && p_star[k] >= -1.0 && p_star[k] <= 1.0,
            ErrorCode::kParameter, "cube parameter p* must lie in [-1, 1]^D");
  }
  return DataDistribution(CubeParams{std::move(p_star)});
}

DataDistribution DataDistribution::FiniteSupport(
    std::vector<Eigen::VectorXd> atoms, std::vector<double> weights) {
  Require(!atoms.empty(), ErrorCode::kParameter, "finite support needs atoms");
  Require(atoms.size() == weights.size(), ErrorCode::kShape,
          "one weight per atom required");
  const Eigen::Index dim = atoms.front().size();
  Require(dim >= 1, ErrorCode::kParameter, "atoms must have D >= 1");
  double total = 0.0;
  for (size_t a = 0; a < atoms.size(); ++a) {
    Require(atoms[a].size() == dim, ErrorCode::kShape,
            "all atoms must share one dimension");
    Require(atoms[a].norm() <= 1.0 + kNormTolerance, ErrorCode::kParameter,
            "atoms must lie in the unit ball");
    Require(weights[a] >= 0.0, ErrorCode::kParameter,
            "weights must be nonnegative");
    total += weights[a];
  }
  Require(std::abs(total - 1.0) <= kWeightTolerance, ErrorCode::kParameter,
          "weights must sum to 1");
  return DataDistribution(
      FiniteSupportParams{std::move(atoms), std::move(weights)});
}

DataDistribution DataDistribution::Sphere(int dim) {
  Require(dim >= 1, ErrorCode::kParameter, "sphere needs D >= 1");
  return DataDistribution(SphereParams{dim});
}

DataDistribution::Kind DataDistribution::kind() const {
  switch (params_.index()) {
    case 0:
      return Kind::kCube;
    case 1:
      return Kind::kFiniteSupport;
    default:
      return Kind::kSphere;
  }
}

int DataDistribution::dim() const { return static_cast<int>(mean_.size()); }

std::string DataDistribution::Describe() const {
  std::ostringstream out;
  switch (kind()) {
    case Kind::kCube:
      out << "cube_p(D=" << dim() << ")";
      break;
    case Kind::kFiniteSupport:
      out << "finite_support(D=" << dim() << ", atoms=" << finite()->atoms.size()
          << ")";
      break;
    case Kind::kSphere:
      out << "sphere_uniform(D=" << dim() << ")";
      break;
  }
  return out.str();
}

void DataDistribution::Sample(Rng& rng, Eigen::Ref<Eigen::VectorXd> out) const {
  const int d = dim();
  switch (kind()) {
    case Kind::kCube: {
      const double scale = 1.0 / std::sqrt(static_cast<double>(d));
      for (int k = 0; k < d; ++k) {
        out[k] = rng.Uniform() < table_[k] ? scale : -scale;
      }
      break;
    }
    case Kind::kFiniteSupport: {
      const double u = rng.Uniform() * table_.back();
      auto it = std::upper_bound(table_.begin(), table_.end(), u);
      size_t index = std::min<size_t>(it - table_.begin(), table_.size() - 1);
      out = finite()->atoms[index];
      break;
    }
    case Kind::kSphere: {
      double norm2 = 0.0;
      do {
        for (int k = 0; k < d; ++k) out[k] = rng.Normal();
        norm2 = out.squaredNorm();
      } while (norm2 == 0.0);
      out /= std::sqrt(norm2);
      break;
    }
  }
}

Eigen::VectorXd DataDistribution::Sample(Rng& rng) const {
  Eigen::VectorXd out(dim());
  Sample(rng, out);
  return out;
}

Eigen::VectorXd RandomCubeParameters(int dim, double scale, const Seed& seed) {
  Require(dim >= 1, ErrorCode::kParameter, "D must be positive");
  Require(scale >= 0.0 && scale <= 1.0, ErrorCode::kParameter,
          "p* scale must lie in [0, 1]");
  Rng rng(seed);
  Eigen::VectorXd p(dim);
  for (int k = 0; k < dim; ++k) p[k] = scale * (2.0 * rng.Uniform() - 1.0);
  return p;
}

}  // namespace pcmi
