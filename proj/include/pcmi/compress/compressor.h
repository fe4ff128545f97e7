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

#ifndef PCMI_COMPRESS_COMPRESSOR_H_
#define PCMI_COMPRESS_COMPRESSOR_H_

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "pcmi/core/random.h"
#include "pcmi/core/seed.h"

namespace pcmi {

// Upper end (exclusive) of the admissible clip radius, sqrt(1.25).
inline constexpr double kMaxClipRadius = 1.118033988749895;

enum class ProjectionKind {
  kGaussian,  // i.i.d. N(0, 1/d) entries.
  kIdentity,  // Theta = I_D; requires d = D.
};

// Compressor hyperparameters: projected dimension d, clip radius c_w and
// dither radius nu.
struct CompressorConfig {
  int d = 1;
  double clip_radius = 1.0;
  double dither_radius = 0.4;
  ProjectionKind projection = ProjectionKind::kGaussian;

  // Throws Error(kParameter) unless d >= 1, 1 <= c_w < sqrt(1.25) and
  // 0 < nu <= 1.
  void Validate() const;

  // (c_w, nu) = (1, 0.4).
  static CompressorConfig ForLinear(int d);
  // d = round(sqrt(n)), (c_w, nu) = (1.1, 0.5).
  static CompressorConfig ForGeneralizedLinear(int n);
  // Theta = I_D, no clipping for w in the unit ball, vanishing dither.
  static CompressorConfig Identity(int dim);
};

// A realized projection matrix together with an identity token. The token is
// derived from the seed that produced the matrix, so reconstructing with a
// different draw is detected.
class Projection {
 public:
  static Projection Sample(int dim, const CompressorConfig& config,
                           const Seed& seed);
  static Projection FromMatrix(Eigen::MatrixXd theta, uint64_t token);

  const Eigen::MatrixXd& matrix() const { return theta_; }
  uint64_t token() const { return token_; }
  int dim() const { return static_cast<int>(theta_.rows()); }
  int d() const { return static_cast<int>(theta_.cols()); }

 private:
  Projection(Eigen::MatrixXd theta, uint64_t token)
      : theta_(std::move(theta)), token_(token) {}

  Eigen::MatrixXd theta_;
  uint64_t token_;
};

// Compressed hypothesis w_hat in R^d, tagged with the projection it was
// produced under.
struct CompressedHypothesis {
  Eigen::VectorXd w_hat;
  uint64_t projection_token = 0;
};

// U = Theta^T w if ||Theta^T w|| <= c_w (inclusive), else 0.
Eigen::VectorXd ClipProject(const Projection& theta, const Eigen::VectorXd& w,
                            double clip_radius);
// W_hat = U + V with V uniform on the d-ball of radius nu.
CompressedHypothesis Quantize(const Eigen::VectorXd& u, double nu,
                              uint64_t projection_token, Rng& rng);
// Theta w_hat. Throws Error(kUsage) if w_hat came from another projection.
Eigen::VectorXd Reconstruct(const Projection& theta,
                            const CompressedHypothesis& w_hat);
// ClipProject followed by Quantize.
CompressedHypothesis Compress(const Projection& theta, const Eigen::VectorXd& w,
                              const CompressorConfig& config, Rng& rng);

// Deterministic lattice cell of U: round(U_k / (2 nu)) per coordinate.
Eigen::VectorXi LatticeCell(const Eigen::VectorXd& u, double nu);

// d log((c_w + nu) / nu), an upper bound on the CMI of the compressed output.
double CmiCap(const CompressorConfig& config);
// exp(-0.21 d (c_w^2 - 1)^2), a bound on P(||Theta^T w|| > c_w) for unit w.
double TailBound(int d, double clip_radius);

// E||Theta Theta^T w||^2 and E||Theta Theta^T w||^4 for Gaussian Theta.
struct NormMoments {
  double m2 = 0.0;
  double m4 = 0.0;
};
NormMoments PushforwardNormMoments(int dim, int d, double w_norm);
// Lower bound on E||Theta W_hat||^2 for a compressed unit-scale hypothesis.
double NormBlowupLowerBound(int dim, int d, double w_norm,
                            const CompressorConfig& config);
// E|V_1| for V uniform on the d-ball of radius nu.
double BallCoordAbsMean(int d, double nu);

std::string ProjectionKindName(ProjectionKind kind);

}  // namespace pcmi

#endif  // PCMI_COMPRESS_COMPRESSOR_H_
