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
#include <optional>
#include <string_view>

#include "trustmesh/bytes.hpp"
#include "trustmesh/rng.hpp"

namespace trustmesh {

/// Prime-order group over edwards25519 via the ristretto255 encoding.
/// q = 2^252 + 27742317777372353535851937790883648493.
///
/// Scalars are 32-byte little-endian canonical; elements are 32-byte
/// ristretto encodings (identity = all zero bytes). The blinding generator
/// H is hashed to the group from the encoding of G, so nobody knows log_G H.
struct Ristretto255 {
  static constexpr std::string_view kName = "ed25519";
  static constexpr std::string_view kOrderDecimal =
      "7237005577332262213973186563042994240857116359379907606001950938285454250989";
  static constexpr std::size_t kScalarBytes = 32;
  static constexpr std::size_t kElementBytes = 32;
  static constexpr std::uint64_t kMaxParticipantId = UINT32_MAX;

  class Scalar {
   public:
    Scalar() = default;

    static Scalar zero() { return Scalar{}; }
    static Scalar one() { return from_u64(1); }
    static Scalar from_u64(std::uint64_t v);
    /// Reduces a 512-bit little-endian integer mod q.
    static Scalar from_wide(const std::array<std::uint8_t, 64>& wide);
    static Scalar random(SeededRng& rng);
    static std::optional<Scalar> decode(ByteView bytes);

    [[nodiscard]] Bytes to_bytes() const { return Bytes(bytes_.begin(), bytes_.end()); }
    [[nodiscard]] const std::array<std::uint8_t, 32>& raw() const { return bytes_; }
    [[nodiscard]] bool is_zero() const;
    /// Throws std::domain_error for zero.
    [[nodiscard]] Scalar inverse() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a);
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    friend bool operator==(const Scalar&, const Scalar&) = default;

   private:
    std::array<std::uint8_t, 32> bytes_{};
  };

  class Element {
   public:
    Element() = default;

    static Element identity() { return Element{}; }
    static std::optional<Element> decode(ByteView bytes);
    /// Maps 64 uniform bytes to the group (Elligator-based).
    static Element from_uniform(const std::array<std::uint8_t, 64>& wide);

    [[nodiscard]] Bytes to_bytes() const { return Bytes(bytes_.begin(), bytes_.end()); }
    [[nodiscard]] bool is_identity() const;

    friend Element operator+(const Element& a, const Element& b);
    friend Element operator-(const Element& a, const Element& b);
    friend Element operator*(const Scalar& s, const Element& e);
    Element& operator+=(const Element& o) { return *this = *this + o; }
    friend bool operator==(const Element&, const Element&) = default;

   private:
    friend struct Ristretto255;
    std::array<std::uint8_t, 32> bytes_{};
  };

  static Element generator();
  static Element blinding_generator();
  static Element mul_generator(const Scalar& s);
};

}  // namespace trustmesh
