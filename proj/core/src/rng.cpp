// Copyright 2026 The trustmesh Authors
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

#include "trustmesh/rng.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

#include "trustmesh/hash.hpp"

namespace trustmesh {

SeededRng::SeededRng(std::uint64_t seed) {
  Bytes material;
  append(material, as_bytes("trustmesh/seed"));
  append_u64_be(material, seed);
  auto digest = sha512(material);
  std::memcpy(key_.data(), digest.data(), key_.size());
}

SeededRng SeededRng::from_key(const Key& key) {
  SeededRng rng;
  rng.key_ = key;
  return rng;
}

SeededRng SeededRng::fork(std::string_view label) const {
  Bytes material;
  append(material, as_bytes("trustmesh/fork"));
  append(material, key_);
  append(material, as_bytes(label));
  auto digest = sha512(material);
  Key child{};
  std::memcpy(child.data(), digest.data(), child.size());
  return from_key(child);
}

void SeededRng::refill() {
  Bytes material(key_.begin(), key_.end());
  append_u64_be(material, counter_++);
  block_ = sha512(material);
  pos_ = 0;
}

void SeededRng::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (pos_ == block_.size()) refill();
    b = block_[pos_++];
  }
}

std::uint64_t SeededRng::next_u64() {
  std::array<std::uint8_t, 8> buf{};
  fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) v = (v << 8) | b;
  return v;
}

std::uint64_t SeededRng::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("SeededRng::uniform: zero bound");
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  for (;;) {
    auto v = next_u64();
    if (v <= limit) return v % bound;
  }
}

bool SeededRng::bernoulli(std::uint64_t num, std::uint64_t den) {
  if (num >= den) return true;
  return uniform(den) < num;
}

}  // namespace trustmesh
