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

#include "trustmesh/hash.hpp"

#include <sodium.h>

#include <new>

namespace trustmesh {

static_assert(sizeof(crypto_hash_sha512_state) <= 256);

Digest512 sha512(ByteView data) {
  Digest512 out{};
  crypto_hash_sha512(out.data(), data.data(), data.size());
  return out;
}

Digest512 domain_hash(std::string_view tag, std::span<const ByteView> parts) {
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  auto tag_bytes = as_bytes(tag);
  crypto_hash_sha512_update(&st, tag_bytes.data(), tag_bytes.size());
  for (const auto& part : parts) {
    Bytes len;
    append_u64_be(len, part.size());
    crypto_hash_sha512_update(&st, len.data(), len.size());
    crypto_hash_sha512_update(&st, part.data(), part.size());
  }
  Digest512 out{};
  crypto_hash_sha512_final(&st, out.data());
  return out;
}

namespace {
crypto_hash_sha512_state* as_state(std::array<std::uint8_t, 256>& raw) {
  return std::launder(reinterpret_cast<crypto_hash_sha512_state*>(raw.data()));
}
}  // namespace

Sha512Stream::Sha512Stream() : state_{} {
  crypto_hash_sha512_init(as_state(state_));
}

void Sha512Stream::update(ByteView data) {
  crypto_hash_sha512_update(as_state(state_), data.data(), data.size());
}

Digest512 Sha512Stream::finish() {
  Digest512 out{};
  crypto_hash_sha512_final(as_state(state_), out.data());
  return out;
}

}  // namespace trustmesh
