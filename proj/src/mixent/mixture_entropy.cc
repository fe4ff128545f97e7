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

#include "pcmi/mixent/mixture_entropy.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pcmi/core/error.h"

namespace pcmi {
namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kLog2 = 0.69314718055994530942;
// Half-width of the integration window beyond the component means.
constexpr double kWindow = 12.0;
constexpr double kAbsTolerance = 1e-10;
constexpr double kMinSplit = 0.5;
// Below this separation f is evaluated by its small-a expansion
// p (1 - p) a^2 / 2, whose relative error is O(a^2).
constexpr double kSmallSeparation = 1e-4;

void CheckWeight(double p) {
  Require(p >= 0.0 && p <= 1.0, ErrorCode::kParameter,
          "mixture weight p must lie in [0, 1]");
}

void CheckFinite(const MixtureParams& mp) {
  CheckWeight(mp.p);
  Require(std::isfinite(mp.a), ErrorCode::kParameter,
          "mixture density needs a finite separation");
}

double Integrate(const MixtureParams& mp, double lo, double hi) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  auto integrand = [&mp](double x) {
    const double log_g = GmixLogPdf(x, mp);
    return -std::exp(log_g) * log_g;
  };
  const double value =
      gauss_kronrod<double, 15>::integrate(integrand, lo, hi, 25, 1e-13, &error);
  if (!(error <= kAbsTolerance)) {
    throw Error(ErrorCode::kNumerical,
                "mixture entropy quadrature did not reach tolerance");
  }
  return value;
}

}  // namespace

double GmixLogPdf(double x, const MixtureParams& mp) {
  CheckFinite(mp);
  const double e0 = mp.p > 0.0 ? std::log(mp.p) - 0.5 * x * x
                               : -std::numeric_limits<double>::infinity();
  const double shifted = x - mp.a;
  const double e1 = mp.p < 1.0 ? std::log1p(-mp.p) - 0.5 * shifted * shifted
                               : -std::numeric_limits<double>::infinity();
  const double top = std::max(e0, e1);
  return top + std::log(std::exp(e0 - top) + std::exp(e1 - top)) - kLogSqrt2Pi;
}

double GmixPdf(double x, const MixtureParams& mp) {
  CheckFinite(mp);
  const double shifted = x - mp.a;
  return std::exp(-kLogSqrt2Pi) * (mp.p * std::exp(-0.5 * x * x) +
                                   (1.0 - mp.p) * std::exp(-0.5 * shifted * shifted));
}

double BinaryEntropyBits(double p) {
  CheckWeight(p);
  if (p == 0.0 || p == 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

double MixtureEntropy(const MixtureParams& mp) {
  CheckFinite(mp);
  const double lo = std::min(0.0, mp.a), hi = std::max(0.0, mp.a);
  // Splitting at both means only helps once the peaks are resolved; a
  // degenerate middle panel stalls the adaptive rule.
  if (hi - lo < kMinSplit) {
    const double mid = 0.5 * (lo + hi);
    return Integrate(mp, mid - kWindow, mid) + Integrate(mp, mid, mid + kWindow);
  }
  return Integrate(mp, lo - kWindow, lo) + Integrate(mp, lo, hi) +
         Integrate(mp, hi, hi + kWindow);
}

double MixtureMutualInformation(const MixtureParams& mp) {
  CheckWeight(mp.p);
  Require(!std::isnan(mp.a), ErrorCode::kParameter, "separation is NaN");
  if (std::abs(mp.a) > kSeparationCutoff) {
    return kLog2 * BinaryEntropyBits(mp.p);
  }
  if (std::abs(mp.a) < kSmallSeparation) {
    return 0.5 * mp.p * (1.0 - mp.p) * mp.a * mp.a;
  }
  const double f = MixtureEntropy(mp) - (kLogSqrt2Pi + 0.5);
  return std::clamp(f, 0.0, kLog2);
}

void WriteMixtureTable(std::span<const double> a_values,
                       std::span<const double> p_values, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "a,p,f\n";
  for (double a : a_values) {
    for (double p : p_values) {
      out << a << ',' << p << ',' << MixtureMutualInformation({a, p}) << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace pcmi
