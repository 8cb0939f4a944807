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
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "trustmesh/bytes.hpp"
#include "trustmesh/rng.hpp"

namespace trustmesh {

/// A cyclic group of prime order q written additively, together with its
/// scalar field Z_q. Backends: Ristretto255 ("ed25519") and ToyGroup ("toy").
///
/// Encodings are canonical: decode(encode(x)) == x, and decode rejects
/// anything that is not the canonical encoding of a value.
template <class G>
concept PrimeOrderGroup = requires(const typename G::Scalar& s,
                                   const typename G::Element& e,
                                   const std::array<std::uint8_t, 64>& wide,
                                   ByteView bytes, SeededRng& rng) {
  { G::kName } -> std::convertible_to<std::string_view>;
  { G::kScalarBytes } -> std::convertible_to<std::size_t>;
  { G::kElementBytes } -> std::convertible_to<std::size_t>;
  { G::kMaxParticipantId } -> std::convertible_to<std::uint64_t>;
  { G::generator() } -> std::same_as<typename G::Element>;
  { G::blinding_generator() } -> std::same_as<typename G::Element>;
  { G::mul_generator(s) } -> std::same_as<typename G::Element>;

  { s + s } -> std::same_as<typename G::Scalar>;
  { s - s } -> std::same_as<typename G::Scalar>;
  { s * s } -> std::same_as<typename G::Scalar>;
  { -s } -> std::same_as<typename G::Scalar>;
  { s == s } -> std::convertible_to<bool>;
  { s.inverse() } -> std::same_as<typename G::Scalar>;
  { s.is_zero() } -> std::convertible_to<bool>;
  { s.to_bytes() } -> std::same_as<Bytes>;
  { G::Scalar::decode(bytes) } -> std::same_as<std::optional<typename G::Scalar>>;
  { G::Scalar::from_u64(std::uint64_t{}) } -> std::same_as<typename G::Scalar>;
  { G::Scalar::from_wide(wide) } -> std::same_as<typename G::Scalar>;
  { G::Scalar::random(rng) } -> std::same_as<typename G::Scalar>;

  { e + e } -> std::same_as<typename G::Element>;
  { e - e } -> std::same_as<typename G::Element>;
  { s * e } -> std::same_as<typename G::Element>;
  { e == e } -> std::convertible_to<bool>;
  { e.is_identity() } -> std::convertible_to<bool>;
  { e.to_bytes() } -> std::same_as<Bytes>;
  { G::Element::identity() } -> std::same_as<typename G::Element>;
  { G::Element::decode(bytes) } -> std::same_as<std::optional<typename G::Element>>;
};

/// Embeds a participant id into Z_q after range-checking it.
template <PrimeOrderGroup G>
typename G::Scalar id_scalar(ParticipantId id) {
  if (id == 0 || id > G::kMaxParticipantId) {
    throw std::invalid_argument("participant id " + std::to_string(id) +
                                " outside 1.." +
                                std::to_string(G::kMaxParticipantId));
  }
  return G::Scalar::from_u64(id);
}

template <PrimeOrderGroup G>
typename G::Scalar random_nonzero(SeededRng& rng) {
  for (;;) {
    auto s = G::Scalar::random(rng);
    if (!s.is_zero()) return s;
  }
}

template <PrimeOrderGroup G>
typename G::Scalar decode_scalar(ByteView bytes) {
  auto s = G::Scalar::decode(bytes);
  if (!s) throw std::invalid_argument("non-canonical scalar encoding");
  return *s;
}

template <PrimeOrderGroup G>
typename G::Element decode_element(ByteView bytes) {
  auto e = G::Element::decode(bytes);
  if (!e) throw std::invalid_argument("invalid group element encoding");
  return *e;
}

}  // namespace trustmesh
