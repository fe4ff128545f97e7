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

#ifndef PCMI_CORE_SAMPLE_H_
#define PCMI_CORE_SAMPLE_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pcmi/core/distribution.h"
#include "pcmi/core/seed.h"

namespace pcmi {

// A dataset stores one point per column (D x n).
using Dataset = Eigen::MatrixXd;

// n x 2 array of i.i.d. points. column(j) holds Z_{i,j} in its i-th column.
class SuperSample {
 public:
  SuperSample() = default;
  SuperSample(Eigen::MatrixXd column0, Eigen::MatrixXd column1);

  int n() const { return static_cast<int>(columns_[0].cols()); }
  int dim() const { return static_cast<int>(columns_[0].rows()); }

  const Eigen::MatrixXd& column(int j) const { return columns_[j]; }
  auto point(int i, int j) const { return columns_[j].col(i); }

 private:
  Eigen::MatrixXd columns_[2];
};

// Membership vector J in {0, 1}^n; J_i selects the training member of row i.
using MembershipVector = std::vector<uint8_t>;

SuperSample SampleSuperSample(const DataDistribution& mu, int n,
                              const Seed& seed);
// Draws n i.i.d. points as a dataset.
Dataset SampleDataset(const DataDistribution& mu, int n, const Seed& seed);

MembershipVector SampleMembership(int n, const Seed& seed);
// The membership vector whose bits are the binary digits of `code`.
MembershipVector MembershipFromCode(int n, uint64_t code);

// S = (Z_{i, J_i})_i and the ghost sample (Z_{i, 1 - J_i})_i.
Dataset SelectTrain(const SuperSample& s, const MembershipVector& j);
Dataset SelectGhost(const SuperSample& s, const MembershipVector& j);

// D x d matrix with i.i.d. N(0, 1/d) entries. Row k is drawn from the stream
// seed.Child(k), so GaussianProjectionOf reproduces Theta^T w without
// materializing rows where w vanishes.
Eigen::MatrixXd SampleGaussianMatrix(int dim, int d, const Seed& seed);
// Theta^T w for the matrix SampleGaussianMatrix(w.size(), d, seed).
Eigen::VectorXd GaussianProjectionOf(const Eigen::VectorXd& w, int d,
                                     const Seed& seed);

// Uniform draw from the closed ball of radius nu in R^d.
Eigen::VectorXd SampleUniformBall(int d, double nu, Rng& rng);
Eigen::VectorXd SampleUniformBall(int d, double nu, const Seed& seed);

// Haar-distributed D x d matrix with orthonormal columns.
Eigen::MatrixXd SampleStiefel(int dim, int d, const Seed& seed);

}  // namespace pcmi

#endif  // PCMI_CORE_SAMPLE_H_
