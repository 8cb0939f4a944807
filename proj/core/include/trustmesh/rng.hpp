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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace trustmesh {

/// Deterministic random source. Every bit of protocol randomness flows
/// through one of these; nothing reads ambient entropy.
///
/// The stream is SHA-512 in counter mode over a 32-byte key. A SeededRng is
/// single-owner: concurrent users take their own stream with fork().
class SeededRng {
 public:
  using Key = std::array<std::uint8_t, 32>;

  explicit SeededRng(std::uint64_t seed);
  static SeededRng from_key(const Key& key);

  /// Independent stream keyed by H(parent key || label). Does not advance
  /// the parent.
  [[nodiscard]] SeededRng fork(std::string_view label) const;

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  /// Uniform in [0, bound). bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound);
  /// True with probability num/den.
  bool bernoulli(std::uint64_t num, std::uint64_t den);

  /// k distinct elements drawn uniformly from items (partial Fisher-Yates).
  template <class T>
  std::vector<T> sample(std::vector<T> items, std::size_t k) {
    if (k > items.size()) k = items.size();
    for (std::size_t i = 0; i < k; ++i) {
      auto j = i + static_cast<std::size_t>(uniform(items.size() - i));
      std::swap(items[i], items[j]);
    }
    items.resize(k);
    return items;
  }

  [[nodiscard]] const Key& key() const { return key_; }

 private:
  SeededRng() = default;
  void refill();

  Key key_{};
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 64> block_{};
  std::size_t pos_ = 64;
};

}  // namespace trustmesh
