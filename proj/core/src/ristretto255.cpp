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

#include "trustmesh/ristretto255.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

#include "trustmesh/hash.hpp"

namespace trustmesh {

namespace {

[[maybe_unused]] const bool kSodiumReady = sodium_init() >= 0;

using Raw = std::array<std::uint8_t, 32>;

Raw reduce32(const Raw& in) {
  std::array<std::uint8_t, 64> wide{};
  std::memcpy(wide.data(), in.data(), in.size());
  Raw out{};
  crypto_core_ristretto255_scalar_reduce(out.data(), wide.data());
  return out;
}

}  // namespace

using Scalar = Ristretto255::Scalar;
using Element = Ristretto255::Element;

Scalar Scalar::from_u64(std::uint64_t v) {
  Scalar s;
  for (int i = 0; i < 8; ++i) s.bytes_[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return s;
}

Scalar Scalar::from_wide(const std::array<std::uint8_t, 64>& wide) {
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.bytes_.data(), wide.data());
  return s;
}

Scalar Scalar::random(SeededRng& rng) {
  std::array<std::uint8_t, 64> wide{};
  rng.fill(wide);
  return from_wide(wide);
}

std::optional<Scalar> Scalar::decode(ByteView bytes) {
  if (bytes.size() != kScalarBytes) return std::nullopt;
  Scalar s;
  std::memcpy(s.bytes_.data(), bytes.data(), kScalarBytes);
  if (reduce32(s.bytes_) != s.bytes_) return std::nullopt;
  return s;
}

bool Scalar::is_zero() const { return sodium_is_zero(bytes_.data(), bytes_.size()) == 1; }

Scalar Scalar::inverse() const {
  Scalar out;
  if (crypto_core_ristretto255_scalar_invert(out.bytes_.data(), bytes_.data()) != 0) {
    throw std::domain_error("inverse of zero scalar");
  }
  return out;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  Scalar out;
  crypto_core_ristretto255_scalar_add(out.bytes_.data(), a.bytes_.data(), b.bytes_.data());
  return out;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  Scalar out;
  crypto_core_ristretto255_scalar_sub(out.bytes_.data(), a.bytes_.data(), b.bytes_.data());
  return out;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar out;
  crypto_core_ristretto255_scalar_mul(out.bytes_.data(), a.bytes_.data(), b.bytes_.data());
  return out;
}

Scalar operator-(const Scalar& a) {
  Scalar out;
  crypto_core_ristretto255_scalar_negate(out.bytes_.data(), a.bytes_.data());
  return out;
}

std::optional<Element> Element::decode(ByteView bytes) {
  if (bytes.size() != kElementBytes) return std::nullopt;
  if (crypto_core_ristretto255_is_valid_point(bytes.data()) != 1) return std::nullopt;
  Element e;
  std::memcpy(e.bytes_.data(), bytes.data(), kElementBytes);
  return e;
}

Element Element::from_uniform(const std::array<std::uint8_t, 64>& wide) {
  Element e;
  crypto_core_ristretto255_from_hash(e.bytes_.data(), wide.data());
  return e;
}

bool Element::is_identity() const { return sodium_is_zero(bytes_.data(), bytes_.size()) == 1; }

Element operator+(const Element& a, const Element& b) {
  Element out;
  if (crypto_core_ristretto255_add(out.bytes_.data(), a.bytes_.data(), b.bytes_.data()) != 0) {
    throw std::logic_error("ristretto255 add on invalid encoding");
  }
  return out;
}

Element operator-(const Element& a, const Element& b) {
  Element out;
  if (crypto_core_ristretto255_sub(out.bytes_.data(), a.bytes_.data(), b.bytes_.data()) != 0) {
    throw std::logic_error("ristretto255 sub on invalid encoding");
  }
  return out;
}

// libsodium reports an identity result as failure; inputs are always valid
// encodings here, so a nonzero return means the product is the identity.
Element operator*(const Scalar& s, const Element& e) {
  Element out;
  if (crypto_scalarmult_ristretto255(out.bytes_.data(), s.raw().data(), e.bytes_.data()) != 0) {
    out.bytes_.fill(0);
  }
  return out;
}

Element Ristretto255::generator() {
  static const Element g = mul_generator(Scalar::one());
  return g;
}

Element Ristretto255::blinding_generator() {
  static const Element h = [] {
    Bytes material;
    append(material, as_bytes("trustmesh/ristretto255/H"));
    append(material, generator().to_bytes());
    return Element::from_uniform(sha512(material));
  }();
  return h;
}

Element Ristretto255::mul_generator(const Scalar& s) {
  Element out;
  if (crypto_scalarmult_ristretto255_base(out.bytes_.data(), s.raw().data()) != 0) {
    out.bytes_.fill(0);
  }
  return out;
}

}  // namespace trustmesh
