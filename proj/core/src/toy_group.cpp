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

#include "trustmesh/toy_group.hpp"

#include <stdexcept>

namespace trustmesh {

namespace {
std::uint32_t pow_mod(std::uint32_t base, std::uint32_t exp, std::uint32_t mod) {
  std::uint32_t acc = 1;
  base %= mod;
  while (exp) {
    if (exp & 1) acc = (acc * base) % mod;
    base = (base * base) % mod;
    exp >>= 1;
  }
  return acc;
}
}  // namespace

ToyGroup::Scalar ToyGroup::Scalar::from_wide(const std::array<std::uint8_t, 64>& wide) {
  std::uint32_t r = 0;
  // Little-endian, like the curve backend.
  for (auto it = wide.rbegin(); it != wide.rend(); ++it) r = (r * 256 + *it) % kOrder;
  return from_u64(r);
}

ToyGroup::Scalar ToyGroup::Scalar::random(SeededRng& rng) {
  return from_u64(rng.uniform(kOrder));
}

std::optional<ToyGroup::Scalar> ToyGroup::Scalar::decode(ByteView bytes) {
  if (bytes.size() != kScalarBytes || bytes[0] >= kOrder) return std::nullopt;
  return from_u64(bytes[0]);
}

ToyGroup::Scalar ToyGroup::Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero scalar");
  return from_u64(pow_mod(value_, kOrder - 2, kOrder));
}

std::optional<ToyGroup::Element> ToyGroup::Element::from_residue(std::uint32_t residue) {
  if (residue == 0 || residue >= kModulus) return std::nullopt;
  if (pow_mod(residue, kOrder, kModulus) != 1) return std::nullopt;
  return Element(static_cast<std::uint8_t>(residue));
}

std::optional<ToyGroup::Element> ToyGroup::Element::decode(ByteView bytes) {
  if (bytes.size() != kElementBytes) return std::nullopt;
  return from_residue(bytes[0]);
}

ToyGroup::Element operator*(ToyGroup::Scalar s, ToyGroup::Element e) {
  return ToyGroup::Element(static_cast<std::uint8_t>(
      pow_mod(e.residue_, s.value(), ToyGroup::kModulus)));
}

}  // namespace trustmesh
