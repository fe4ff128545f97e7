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

#include "pcmi/core/random.h"

namespace pcmi {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85;

inline void MulHiLo(uint32_t a, uint32_t b, uint32_t* hi, uint32_t* lo) {
  const uint64_t product = static_cast<uint64_t>(a) * b;
  *hi = static_cast<uint32_t>(product >> 32);
  *lo = static_cast<uint32_t>(product);
}

}  // namespace

std::array<uint32_t, 4> Philox4x32(std::array<uint32_t, 4> ctr,
                                   std::array<uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kPhiloxM0, ctr[0], &hi0, &lo0);
    MulHiLo(kPhiloxM1, ctr[2], &hi1, &lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Rng::Rng(const Seed& seed)
    : key_{static_cast<uint32_t>(seed.Key()),
           static_cast<uint32_t>(seed.Key() >> 32)} {}

Rng::result_type Rng::operator()() {
  if (lane_ == 2) {
    buffer_ = Philox4x32({static_cast<uint32_t>(block_),
                          static_cast<uint32_t>(block_ >> 32), 0, 0},
                         key_);
    ++block_;
    lane_ = 0;
  }
  const uint64_t out = (static_cast<uint64_t>(buffer_[2 * lane_ + 1]) << 32) |
                       buffer_[2 * lane_];
  ++lane_;
  return out;
}

double Rng::Uniform() { return std::generate_canonical<double, 53>(*this); }

double Rng::Normal() { return normal_(*this); }

int Rng::UniformIndex(int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(*this);
}

}  // namespace pcmi
