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

#ifndef PCMI_CORE_SEED_H_
#define PCMI_CORE_SEED_H_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace pcmi {

// Hierarchical seed: a root value plus a path of child indices. Every random
// quantity in the library is drawn from a stream keyed by one Seed, so any
// sub-computation can be replayed in isolation and results do not depend on
// evaluation order or thread scheduling.
class Seed {
 public:
  explicit Seed(uint64_t root = 0, std::vector<uint64_t> path = {});

  // Seed for the `index`-th child of this node.
  Seed Child(uint64_t index) const;
  // Convenience for a chain of children.
  Seed Descend(std::initializer_list<uint64_t> indices) const;

  uint64_t root() const { return root_; }
  const std::vector<uint64_t>& path() const { return path_; }

  // 64-bit stream key derived from root and path.
  uint64_t Key() const { return key_; }

  // Human-readable form "root/i/j/...".
  std::string ToString() const;
  // Inverse of ToString. Throws Error(kConfig) on malformed input.
  static Seed Parse(const std::string& text);

  bool operator==(const Seed& other) const {
    return root_ == other.root_ && path_ == other.path_;
  }

 private:
  uint64_t root_;
  std::vector<uint64_t> path_;
  uint64_t key_;
};

}  // namespace pcmi

#endif  // PCMI_CORE_SEED_H_
