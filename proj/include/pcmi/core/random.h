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

#ifndef PCMI_CORE_RANDOM_H_
#define PCMI_CORE_RANDOM_H_

#include <array>
#include <cstdint>
#include <limits>
#include <random>

#include "pcmi/core/seed.h"

namespace pcmi {

// Philox4x32-10 block function (Salmon et al., SC'11). Maps a 128-bit counter
// and a 64-bit key to 128 pseudo-random bits.
std::array<uint32_t, 4> Philox4x32(std::array<uint32_t, 4> counter,
                                   std::array<uint32_t, 2> key);

// Counter-based 64-bit engine keyed by a Seed. Satisfies the standard
// UniformRandomBitGenerator requirements so <random> distributions apply.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(const Seed& seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform on [0, 1).
  double Uniform();
  // Standard normal.
  double Normal();
  // Bernoulli(p).
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform on {0, ..., n - 1}.
  int UniformIndex(int n);

 private:
  std::array<uint32_t, 2> key_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buffer_{};
  int lane_ = 2;  // Number of 64-bit words consumed from buffer_.
  std::normal_distribution<double> normal_;
};

}  // namespace pcmi

#endif  // PCMI_CORE_RANDOM_H_
