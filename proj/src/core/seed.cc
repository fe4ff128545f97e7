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

#include "pcmi/core/seed.h"

#include <charconv>
#include <sstream>

#include "pcmi/core/error.h"

namespace pcmi {
namespace {

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t ExtendKey(uint64_t key, uint64_t index) {
  return Mix64(key ^ Mix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace

Seed::Seed(uint64_t root, std::vector<uint64_t> path)
    : root_(root), path_(std::move(path)), key_(Mix64(root)) {
  for (uint64_t index : path_) key_ = ExtendKey(key_, index);
}

Seed Seed::Child(uint64_t index) const {
  Seed child = *this;
  child.path_.push_back(index);
  child.key_ = ExtendKey(key_, index);
  return child;
}

Seed Seed::Descend(std::initializer_list<uint64_t> indices) const {
  Seed out = *this;
  for (uint64_t index : indices) out = out.Child(index);
  return out;
}

std::string Seed::ToString() const {
  std::ostringstream out;
  out << root_;
  for (uint64_t index : path_) out << '/' << index;
  return out.str();
}

Seed Seed::Parse(const std::string& text) {
  std::vector<uint64_t> parts;
  size_t start = 0;
  while (true) {
    size_t end = text.find('/', start);
    if (end == std::string::npos) end = text.size();
    uint64_t value = 0;
    const char* first = text.data() + start;
    const char* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
      throw Error(ErrorCode::kConfig, "malformed seed '" + text + "'");
    }
    parts.push_back(value);
    if (end == text.size()) break;
    start = end + 1;
  }
  return Seed(parts.front(), std::vector<uint64_t>(parts.begin() + 1, parts.end()));
}

}  // namespace pcmi
