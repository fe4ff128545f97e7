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

#include "pcmi/core/sample.h"

#include <cmath>

#include "pcmi/core/error.h"

namespace pcmi {

SuperSample::SuperSample(Eigen::MatrixXd column0, Eigen::MatrixXd column1) {
  Require(column0.rows() == column1.rows() && column0.cols() == column1.cols(),
          ErrorCode::kShape, "supersample columns must have equal shape");
  columns_[0] = std::move(column0);
  columns_[1] = std::move(column1);
}

SuperSample SampleSuperSample(const DataDistribution& mu, int n,
                              const Seed& seed) {
  Require(n >= 1, ErrorCode::kParameter, "supersample needs n >= 1");
  Eigen::MatrixXd c0(mu.dim(), n), c1(mu.dim(), n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    mu.Sample(rng, c0.col(i));
    mu.Sample(rng, c1.col(i));
  }
  return SuperSample(std::move(c0), std::move(c1));
}

Dataset SampleDataset(const DataDistribution& mu, int n, const Seed& seed) {
  Require(n >= 1, ErrorCode::kParameter, "dataset needs n >= 1");
  Dataset out(mu.dim(), n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) mu.Sample(rng, out.col(i));
  return out;
}

MembershipVector SampleMembership(int n, const Seed& seed) {
  Require(n >= 1, ErrorCode::kParameter, "membership vector needs n >= 1");
  Rng rng(seed);
  MembershipVector j(n);
  uint64_t bits = 0;
  for (int i = 0; i < n; ++i) {
    if (i % 64 == 0) bits = rng();
    j[i] = static_cast<uint8_t>(bits & 1u);
    bits >>= 1;
  }
  return j;
}

MembershipVector MembershipFromCode(int n, uint64_t code) {
  Require(n >= 1 && n <= 64, ErrorCode::kParameter,
          "membership code supports 1 <= n <= 64");
  MembershipVector j(n);
  for (int i = 0; i < n; ++i) j[i] = static_cast<uint8_t>((code >> i) & 1u);
  return j;
}

namespace {

Dataset Select(const SuperSample& s, const MembershipVector& j, bool ghost) {
  Require(static_cast<int>(j.size()) == s.n(), ErrorCode::kShape,
          "membership vector length must equal n");
  Dataset out(s.dim(), s.n());
  for (int i = 0; i < s.n(); ++i) {
    const int col = ghost ? 1 - j[i] : j[i];
    out.col(i) = s.point(i, col);
  }
  return out;
}

}  // namespace

Dataset SelectTrain(const SuperSample& s, const MembershipVector& j) {
  return Select(s, j, false);
}

Dataset SelectGhost(const SuperSample& s, const MembershipVector& j) {
  return Select(s, j, true);
}

Eigen::MatrixXd SampleGaussianMatrix(int dim, int d, const Seed& seed) {
  Require(d >= 1 && dim >= 1, ErrorCode::kParameter, "need D, d >= 1");
  Require(d <= dim, ErrorCode::kParameter, "projection needs d <= D");
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Eigen::MatrixXd theta(dim, d);
  for (int k = 0; k < dim; ++k) {
    Rng rng(seed.Child(k));
    for (int j = 0; j < d; ++j) theta(k, j) = scale * rng.Normal();
  }
  return theta;
}

Eigen::VectorXd GaussianProjectionOf(const Eigen::VectorXd& w, int d,
                                     const Seed& seed) {
  const int dim = static_cast<int>(w.size());
  Require(d >= 1 && dim >= 1, ErrorCode::kParameter, "need D, d >= 1");
  Require(d <= dim, ErrorCode::kParameter, "projection needs d <= D");
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < dim; ++k) {
    if (w[k] == 0.0) continue;
    Rng rng(seed.Child(k));
    for (int j = 0; j < d; ++j) u[j] += w[k] * scale * rng.Normal();
  }
  return u;
}

Eigen::VectorXd SampleUniformBall(int d, double nu, Rng& rng) {
  Require(d >= 1, ErrorCode::kParameter, "ball dimension must be >= 1");
  Require(nu > 0.0 && std::isfinite(nu), ErrorCode::kParameter,
          "ball radius must be positive");
  Eigen::VectorXd v(d);
  double norm2 = 0.0;
  do {
    for (int k = 0; k < d; ++k) v[k] = rng.Normal();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  const double radius = nu * std::pow(rng.Uniform(), 1.0 / d);
  return v * (radius / std::sqrt(norm2));
}

Eigen::VectorXd SampleUniformBall(int d, double nu, const Seed& seed) {
  Rng rng(seed);
  return SampleUniformBall(d, nu, rng);
}

Eigen::MatrixXd SampleStiefel(int dim, int d, const Seed& seed) {
  Require(d >= 1 && d <= dim, ErrorCode::kParameter,
          "Stiefel sample needs 1 <= d <= D");
  Rng rng(seed);
  Eigen::MatrixXd g(dim, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < dim; ++k) g(k, j) = rng.Normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, d);
  const Eigen::MatrixXd& r = qr.matrixQR();
  // Flip column signs so that diag(R) > 0, which makes Q Haar-distributed.
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace pcmi
