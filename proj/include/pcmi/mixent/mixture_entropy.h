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

#ifndef PCMI_MIXENT_MIXTURE_ENTROPY_H_
#define PCMI_MIXENT_MIXTURE_ENTROPY_H_

#include <iosfwd>
#include <limits>
#include <span>

namespace pcmi {

// Two-component unit-variance Gaussian mixture p N(0, 1) + (1 - p) N(a, 1).
// `a` may be +-infinity, which denotes the separated limit.
struct MixtureParams {
  double a = 0.0;
  double p = 0.5;

  static MixtureParams Separated(double p) {
    return {std::numeric_limits<double>::infinity(), p};
  }
};

// Mixture density; requires finite a and p in [0, 1].
double GmixPdf(double x, const MixtureParams& mp);
// log of the mixture density, stable in the tails.
double GmixLogPdf(double x, const MixtureParams& mp);

// Binary entropy in bits.
double BinaryEntropyBits(double p);

// Separation beyond which f is replaced by its limit log(2) h_b(p).
inline constexpr double kSeparationCutoff = 40.0;

// f(a, p) = h(g_{a,p}) - log sqrt(2 pi e), the mutual information between a
// Bernoulli(1 - p) selector and the mixture output. Computed by adaptive
// Gauss-Kronrod quadrature and clamped to [0, log 2].
double MixtureMutualInformation(const MixtureParams& mp);
// Differential entropy h(g_{a,p}) in nats (finite a).
double MixtureEntropy(const MixtureParams& mp);

// Writes f(a, p) over the grid as CSV with columns a,p,f.
void WriteMixtureTable(std::span<const double> a_values,
                       std::span<const double> p_values, std::ostream& out);

}  // namespace pcmi

#endif  // PCMI_MIXENT_MIXTURE_ENTROPY_H_
