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

/// The order-11 subgroup of Z_23^* with g = 2 and h = 3. Every discrete log
/// is brute-forceable, which lets tests check protocol equations against an
/// exhaustive oracle. Participant ids are limited to 1..10.
struct ToyGroup {
  static constexpr std::string_view kName = "toy";
  static constexpr std::uint32_t kModulus = 23;
  static constexpr std::uint32_t kOrder = 11;
  static constexpr std::size_t kScalarBytes = 1;
  static constexpr std::size_t kElementBytes = 1;
  static constexpr std::uint64_t kMaxParticipantId = kOrder - 1;

  class Scalar {
   public:
    constexpr Scalar() = default;

    static Scalar zero() { return Scalar{}; }
    static Scalar one() { return from_u64(1); }
    static Scalar from_u64(std::uint64_t v) {
      return Scalar(static_cast<std::uint8_t>(v % kOrder));
    }
    static Scalar from_wide(const std::array<std::uint8_t, 64>& wide);
    static Scalar random(SeededRng& rng);
    static std::optional<Scalar> decode(ByteView bytes);

    [[nodiscard]] Bytes to_bytes() const { return Bytes{value_}; }
    [[nodiscard]] std::uint32_t value() const { return value_; }
    [[nodiscard]] bool is_zero() const { return value_ == 0; }
    /// Throws std::domain_error for zero.
    [[nodiscard]] Scalar inverse() const;

    friend Scalar operator+(Scalar a, Scalar b) {
      return from_u64(std::uint64_t{a.value_} + b.value_);
    }
    friend Scalar operator-(Scalar a, Scalar b) {
      return from_u64(std::uint64_t{a.value_} + kOrder - b.value_);
    }
    friend Scalar operator*(Scalar a, Scalar b) {
      return from_u64(std::uint64_t{a.value_} * b.value_);
    }
    friend Scalar operator-(Scalar a) { return zero() - a; }
    Scalar& operator+=(Scalar o) { return *this = *this + o; }
    Scalar& operator-=(Scalar o) { return *this = *this - o; }
    Scalar& operator*=(Scalar o) { return *this = *this * o; }
    friend bool operator==(Scalar, Scalar) = default;

   private:
    explicit constexpr Scalar(std::uint8_t v) : value_(v) {}
    std::uint8_t value_ = 0;
  };

  class Element {
   public:
    constexpr Element() = default;

    static Element identity() { return Element{}; }
    /// Accepts only residues in the order-11 subgroup.
    static std::optional<Element> from_residue(std::uint32_t residue);
    static std::optional<Element> decode(ByteView bytes);

    [[nodiscard]] Bytes to_bytes() const { return Bytes{residue_}; }
    [[nodiscard]] std::uint32_t residue() const { return residue_; }
    [[nodiscard]] bool is_identity() const { return residue_ == 1; }

    friend Element operator+(Element a, Element b) {
      return Element(static_cast<std::uint8_t>(
          (std::uint32_t{a.residue_} * b.residue_) % kModulus));
    }
    friend Element operator-(Element a, Element b) {
      return a + Scalar::from_u64(kOrder - 1) * b;
    }
    friend Element operator*(Scalar s, Element e);
    Element& operator+=(Element o) { return *this = *this + o; }
    friend bool operator==(Element, Element) = default;

   private:
    explicit constexpr Element(std::uint8_t r) : residue_(r) {}
    std::uint8_t residue_ = 1;
  };

  static Element generator() { return *Element::from_residue(2); }
  static Element blinding_generator() { return *Element::from_residue(3); }
  static Element mul_generator(const Scalar& s) { return s * generator(); }
};

}  // namespace trustmesh
