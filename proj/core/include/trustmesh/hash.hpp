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
#include <initializer_list>
#include <span>
#include <string_view>

#include "trustmesh/bytes.hpp"

namespace trustmesh {

using Digest512 = std::array<std::uint8_t, 64>;

// Domain tags for the protocol hash functions.
inline constexpr std::string_view kTagPok = "H";
inline constexpr std::string_view kTagBinding = "H1";
inline constexpr std::string_view kTagChallenge = "H2";

Digest512 sha512(ByteView data);

/// SHA-512 over tag || (len_be64(part) || part)*.
Digest512 domain_hash(std::string_view tag, std::span<const ByteView> parts);

inline Digest512 domain_hash(std::string_view tag,
                             std::initializer_list<ByteView> parts) {
  return domain_hash(tag, std::span<const ByteView>(parts.begin(), parts.size()));
}

/// Incremental SHA-512 for streams (trace hashing).
class Sha512Stream {
 public:
  Sha512Stream();
  void update(ByteView data);
  Digest512 finish();

 private:
  alignas(64) std::array<std::uint8_t, 256> state_;
};

/// Deterministic map into Z_q for any backend with Scalar::from_wide.
template <class G>
typename G::Scalar hash_to_scalar(std::string_view tag,
                                  std::initializer_list<ByteView> parts) {
  return G::Scalar::from_wide(domain_hash(tag, parts));
}

template <class G>
typename G::Scalar hash_to_scalar(std::string_view tag,
                                  std::span<const ByteView> parts) {
  return G::Scalar::from_wide(domain_hash(tag, parts));
}

}  // namespace trustmesh
