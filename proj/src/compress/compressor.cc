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

#include "pcmi/compress/compressor.h"

#include <cmath>

#include "pcmi/core/error.h"
#include "pcmi/core/sample.h"

namespace pcmi {
namespace {

// Dither radius used by the identity compressor; small enough to be
// negligible in any loss difference.
constexpr double kIdentityDither = 1e-12;
// Unit-norm learner outputs can exceed 1 by rounding; they must not be clipped.
constexpr double kIdentityClip = 1.0 + 1e-9;

}  // namespace

void CompressorConfig::Validate() const {
  Require(d >= 1, ErrorCode::kParameter, "compressed dimension d must be >= 1");
  Require(clip_radius >= 1.0 && clip_radius < kMaxClipRadius,
          ErrorCode::kParameter, "clip radius must lie in [1, sqrt(1.25))");
  Require(dither_radius > 0.0 && dither_radius <= 1.0, ErrorCode::kParameter,
          "dither radius must lie in (0, 1]");
}

CompressorConfig CompressorConfig::ForLinear(int d) {
  CompressorConfig c;
  c.d = d;
  c.clip_radius = 1.0;
  c.dither_radius = 0.4;
  return c;
}

CompressorConfig CompressorConfig::ForGeneralizedLinear(int n) {
  Require(n >= 1, ErrorCode::kParameter, "n must be >= 1");
  CompressorConfig c;
  c.d = std::max(1, static_cast<int>(std::lround(std::sqrt(n))));
  c.clip_radius = 1.1;
  c.dither_radius = 0.5;
  return c;
}

CompressorConfig CompressorConfig::Identity(int dim) {
  CompressorConfig c;
  c.d = dim;
  c.clip_radius = kIdentityClip;
  c.dither_radius = kIdentityDither;
  c.projection = ProjectionKind::kIdentity;
  return c;
}

Projection Projection::Sample(int dim, const CompressorConfig& config,
                              const Seed& seed) {
  config.Validate();
  switch (config.projection) {
    case ProjectionKind::kGaussian:
      return Projection(SampleGaussianMatrix(dim, config.d, seed), seed.Key());
    case ProjectionKind::kIdentity:
      Require(config.d == dim, ErrorCode::kParameter,
              "identity projection needs d = D");
      return Projection(Eigen::MatrixXd::Identity(dim, dim), seed.Key());
  }
  throw Error(ErrorCode::kUnsupported, "unknown projection kind");
}

Projection Projection::FromMatrix(Eigen::MatrixXd theta, uint64_t token) {
  Require(theta.cols() >= 1 && theta.cols() <= theta.rows(),
          ErrorCode::kParameter, "projection needs 1 <= d <= D");
  return Projection(std::move(theta), token);
}

Eigen::VectorXd ClipProject(const Projection& theta, const Eigen::VectorXd& w,
                            double clip_radius) {
  Require(w.size() == theta.dim(), ErrorCode::kShape,
          "hypothesis dimension must equal D");
  Eigen::VectorXd u = theta.matrix().transpose() * w;
  if (u.norm() > clip_radius) u.setZero();
  return u;
}

CompressedHypothesis Quantize(const Eigen::VectorXd& u, double nu,
                              uint64_t projection_token, Rng& rng) {
  CompressedHypothesis out;
  out.w_hat = u + SampleUniformBall(static_cast<int>(u.size()), nu, rng);
  out.projection_token = projection_token;
  return out;
}

Eigen::VectorXd Reconstruct(const Projection& theta,
                            const CompressedHypothesis& w_hat) {
  Require(w_hat.projection_token == theta.token(), ErrorCode::kUsage,
          "compressed hypothesis was produced under a different projection");
  Require(w_hat.w_hat.size() == theta.d(), ErrorCode::kShape,
          "compressed hypothesis dimension must equal d");
  return theta.matrix() * w_hat.w_hat;
}

CompressedHypothesis Compress(const Projection& theta, const Eigen::VectorXd& w,
                              const CompressorConfig& config, Rng& rng) {
  Require(theta.d() == config.d, ErrorCode::kShape,
          "projection width must equal the configured d");
  return Quantize(ClipProject(theta, w, config.clip_radius),
                  config.dither_radius, theta.token(), rng);
}

Eigen::VectorXi LatticeCell(const Eigen::VectorXd& u, double nu) {
  Require(nu > 0.0, ErrorCode::kParameter, "cell radius must be positive");
  Eigen::VectorXi cell(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    cell[k] = static_cast<int>(std::lround(u[k] / (2.0 * nu)));
  }
  return cell;
}

double CmiCap(const CompressorConfig& config) {
  config.Validate();
  return config.d * std::log((config.clip_radius + config.dither_radius) /
                             config.dither_radius);
}

double TailBound(int d, double clip_radius) {
  Require(d >= 1, ErrorCode::kParameter, "d must be >= 1");
  const double gap = clip_radius * clip_radius - 1.0;
  return std::exp(-0.21 * d * gap * gap);
}

NormMoments PushforwardNormMoments(int dim, int d, double w_norm) {
  Require(d >= 1 && d <= dim, ErrorCode::kParameter, "need 1 <= d <= D");
  const double D = dim, dd = d;
  const double w2 = w_norm * w_norm;
  NormMoments m;
  m.m2 = (D + dd + 1.0) / dd * w2;
  m.m4 = (D + dd + 3.0) * (D + dd + 5.0) * (dd + 2.0) / (dd * dd * dd) * w2 * w2;
  return m;
}

double NormBlowupLowerBound(int dim, int d, double w_norm,
                            const CompressorConfig& config) {
  config.Validate();
  const NormMoments unit = PushforwardNormMoments(dim, d, 1.0);
  const double gap = config.clip_radius * config.clip_radius - 1.0;
  return unit.m2 * w_norm * w_norm -
         std::sqrt(unit.m4) * w_norm * w_norm * std::exp(-0.1 * d * gap * gap) -
         static_cast<double>(dim) * config.dither_radius *
             config.dither_radius / d;
}

double BallCoordAbsMean(int d, double nu) {
  Require(d >= 1, ErrorCode::kParameter, "d must be >= 1");
  Require(nu > 0.0, ErrorCode::kParameter, "nu must be positive");
  const double log_ratio = std::lgamma((d + 2.0) / 2.0) - std::lgamma((d + 3.0) / 2.0);
  return nu * std::exp(log_ratio) / std::sqrt(M_PI);
}

std::string ProjectionKindName(ProjectionKind kind) {
  return kind == ProjectionKind::kIdentity ? "identity" : "gaussian";
}

}  // namespace pcmi
