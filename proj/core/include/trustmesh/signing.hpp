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

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trustmesh/dkg.hpp"
#include "trustmesh/group.hpp"
#include "trustmesh/hash.hpp"
#include "trustmesh/outcome.hpp"
#include "trustmesh/polynomial.hpp"

namespace trustmesh {

/// (R, z) with z*G == R + H2(R || pk || m)*pk.
/// Encoding: R || z (64 bytes on the curve backend).
template <PrimeOrderGroup G>
struct Signature {
  typename G::Element R;
  typename G::Scalar z;

  [[nodiscard]] Bytes encode() const {
    Bytes out = R.to_bytes();
    append(out, z.to_bytes());
    return out;
  }
  static std::optional<Signature> decode(ByteView bytes) {
    if (bytes.size() != G::kElementBytes + G::kScalarBytes) return std::nullopt;
    auto r = G::Element::decode(bytes.first(G::kElementBytes));
    auto z = G::Scalar::decode(bytes.subspan(G::kElementBytes));
    if (!r || !z) return std::nullopt;
    return Signature{*r, *z};
  }
  friend bool operator==(const Signature&, const Signature&) = default;
};

template <PrimeOrderGroup G>
typename G::Scalar signature_challenge(const typename G::Element& R,
                                       const typename G::Element& pk, ByteView message) {
  const auto r = R.to_bytes();
  const auto p = pk.to_bytes();
  return hash_to_scalar<G>(kTagChallenge, {ByteView(r), ByteView(p), message});
}

template <PrimeOrderGroup G>
bool verify(const typename G::Element& pk, ByteView message, const Signature<G>& sig) {
  return G::mul_generator(sig.z) == sig.R + signature_challenge<G>(sig.R, pk, message) * pk;
}

/// Schnorr signature with an explicit nonce r: R = r*G, z = r + sk*c.
template <PrimeOrderGroup G>
Signature<G> single_party_sign_with_nonce(const typename G::Scalar& sk, ByteView message,
                                          const typename G::Scalar& r) {
  const auto R = G::mul_generator(r);
  const auto c = signature_challenge<G>(R, G::mul_generator(sk), message);
  return {R, r + sk * c};
}

template <PrimeOrderGroup G>
Signature<G> single_party_sign(const typename G::Scalar& sk, ByteView message, SeededRng& rng) {
  return single_party_sign_with_nonce<G>(sk, message, random_nonzero<G>(rng));
}

template <PrimeOrderGroup G>
struct NonceCommitment {
  typename G::Element A;  // a*G
  typename G::Element B;  // b*G
  friend bool operator==(const NonceCommitment&, const NonceCommitment&) = default;
};

/// Public half of a signer's preprocessed nonces.
template <PrimeOrderGroup G>
struct NonceCommitmentList {
  ParticipantId owner = 0;
  std::vector<NonceCommitment<G>> pairs;
};

/// The message plus one nonce commitment pair per coalition member.
template <PrimeOrderGroup G>
class SigningPackage {
 public:
  SigningPackage(Bytes message, std::map<ParticipantId, NonceCommitment<G>> commitments)
      : message_(std::move(message)), commitments_(std::move(commitments)) {
    if (commitments_.empty()) throw std::invalid_argument("signing package has no signers");
    for (const auto& [id, pair] : commitments_) {
      id_scalar<G>(id);
      coalition_.push_back(id);
      append_u32_be(encoded_commitments_, id);
      append(encoded_commitments_, pair.A.to_bytes());
      append(encoded_commitments_, pair.B.to_bytes());
    }
  }

  [[nodiscard]] const Bytes& message() const { return message_; }
  [[nodiscard]] const std::vector<ParticipantId>& coalition() const { return coalition_; }
  [[nodiscard]] const std::map<ParticipantId, NonceCommitment<G>>& commitments() const {
    return commitments_;
  }
  [[nodiscard]] bool contains(ParticipantId id) const { return commitments_.count(id) != 0; }
  /// Ascending id || A || B for every member; the serialized commitment list.
  [[nodiscard]] const Bytes& encoded_commitments() const { return encoded_commitments_; }

  /// Hash binding the message and the full commitment list.
  [[nodiscard]] Digest512 context_hash() const {
    return domain_hash("trustmesh/package", {ByteView(message_), ByteView(encoded_commitments_)});
  }

  friend bool operator==(const SigningPackage& a, const SigningPackage& b) {
    return a.message_ == b.message_ && a.commitments_ == b.commitments_;
  }

 private:
  Bytes message_;
  std::map<ParticipantId, NonceCommitment<G>> commitments_;
  std::vector<ParticipantId> coalition_;
  Bytes encoded_commitments_;
};

/// beta_id = H1(id || m || commitment list).
template <PrimeOrderGroup G>
typename G::Scalar binding_factor(const SigningPackage<G>& package, ParticipantId id) {
  Bytes id_bytes;
  append_u32_be(id_bytes, id);
  return hash_to_scalar<G>(kTagBinding, {ByteView(id_bytes), ByteView(package.message()),
                                         ByteView(package.encoded_commitments())});
}

/// Per-signer commitments R_l = A_l + beta_l*B_l, their sum R and the
/// challenge c = H2(R || pk || m).
template <PrimeOrderGroup G>
struct GroupCommitment {
  std::map<ParticipantId, typename G::Scalar> binding;
  std::map<ParticipantId, typename G::Element> per_signer;
  typename G::Element R;
  typename G::Scalar challenge;
};

template <PrimeOrderGroup G>
GroupCommitment<G> group_commitment(const SigningPackage<G>& package,
                                    const typename G::Element& group_pk) {
  GroupCommitment<G> gc;
  gc.R = G::Element::identity();
  for (const auto& [id, pair] : package.commitments()) {
    const auto beta = binding_factor(package, id);
    const auto r = pair.A + beta * pair.B;
    gc.binding[id] = beta;
    gc.per_signer[id] = r;
    gc.R += r;
  }
  gc.challenge = signature_challenge<G>(gc.R, group_pk, package.message());
  return gc;
}

/// z_l*G == R_l + (c*lambda_l)*pk_l.
template <PrimeOrderGroup G>
bool verify_partial(const SigningPackage<G>& package, const GroupCommitment<G>& gc,
                    ParticipantId id, const typename G::Scalar& z,
                    const typename G::Element& pk_share) {
  auto it = gc.per_signer.find(id);
  if (it == gc.per_signer.end()) return false;
  const auto lambda = lagrange_at_zero<G>(id, package.coalition());
  return G::mul_generator(z) == it->second + (gc.challenge * lambda) * pk_share;
}

/// Thrown when a signer is asked to reuse a consumed nonce pair.
class NonceReuseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A participant's signing role over its DKG key share. Owns the secret
/// nonces; each pair is consumed by exactly one partial signature.
template <PrimeOrderGroup G>
class Signer {
 public:
  using Scalar = typename G::Scalar;

  explicit Signer(DkgKeys<G> keys) : keys_(std::move(keys)) {}

  /// Samples m fresh nonce pairs (a, b) in Z_q^* and publishes (a*G, b*G).
  NonceCommitmentList<G> sign_round1(std::size_t m, SeededRng& rng) {
    NonceCommitmentList<G> list{keys_.id, {}};
    for (std::size_t i = 0; i < m; ++i) {
      Slot slot{random_nonzero<G>(rng), random_nonzero<G>(rng), {}, false};
      slot.commitment = {G::mul_generator(slot.a), G::mul_generator(slot.b)};
      list.pairs.push_back(slot.commitment);
      slots_.push_back(std::move(slot));
    }
    return list;
  }

  /// z_j = a_j + b_j*beta_j + lambda_j*sk_j*c. Consumes the nonce pair the
  /// package names for this signer.
  Scalar sign_round2_partial(const SigningPackage<G>& package) {
    if (!package.contains(keys_.id)) throw std::invalid_argument("signer is not in the coalition");
    if (package.coalition().size() < keys_.threshold) {
      throw std::invalid_argument("coalition smaller than the threshold");
    }
    for (const auto& [id, pair] : package.commitments()) {
      if (std::find(keys_.members.begin(), keys_.members.end(), id) == keys_.members.end()) {
        throw std::invalid_argument("coalition member outside the key's group");
      }
    }
    const auto& mine = package.commitments().at(keys_.id);
    auto slot = std::find_if(slots_.begin(), slots_.end(),
                             [&](const Slot& s) { return s.commitment == mine; });
    if (slot == slots_.end()) throw std::invalid_argument("package names an unknown nonce pair");
    if (slot->consumed) throw NonceReuseError("nonce pair already consumed");

    const auto gc = group_commitment(package, keys_.group_pk);
    const auto lambda = lagrange_at_zero<G>(keys_.id, package.coalition());
    const auto z = slot->a + slot->b * gc.binding.at(keys_.id) +
                   lambda * keys_.sk_share * gc.challenge;
    slot->a = Scalar::zero();
    slot->b = Scalar::zero();
    slot->consumed = true;
    return z;
  }

  [[nodiscard]] const DkgKeys<G>& keys() const { return keys_; }
  [[nodiscard]] std::size_t unused_nonces() const {
    return static_cast<std::size_t>(
        std::count_if(slots_.begin(), slots_.end(), [](const Slot& s) { return !s.consumed; }));
  }
  /// First unconsumed commitment pair, if any.
  [[nodiscard]] std::optional<NonceCommitment<G>> next_commitment() const {
    for (const auto& s : slots_) {
      if (!s.consumed) return s.commitment;
    }
    return std::nullopt;
  }
  /// Secret nonce pair still held for a commitment; nullopt once consumed.
  [[nodiscard]] std::optional<std::pair<Scalar, Scalar>> held_nonces(
      const NonceCommitment<G>& c) const {
    for (const auto& s : slots_) {
      if (s.commitment == c && !s.consumed) return std::make_pair(s.a, s.b);
    }
    return std::nullopt;
  }

 private:
  struct Slot {
    Scalar a, b;
    NonceCommitment<G> commitment;
    bool consumed;
  };

  DkgKeys<G> keys_;
  std::vector<Slot> slots_;
};

/// Verifies every partial and sums them. Aborts naming any signer whose
/// partial fails the check; reports missing partials as MissingPartial.
template <PrimeOrderGroup G>
Outcome<Signature<G>> aggregate(const SigningPackage<G>& package,
                                const std::map<ParticipantId, typename G::Scalar>& partials,
                                const std::map<ParticipantId, typename G::Element>& pk_shares,
                                const typename G::Element& group_pk) {
  const auto gc = group_commitment(package, group_pk);
  std::vector<ParticipantId> missing, invalid;
  auto z = G::Scalar::zero();
  for (auto id : package.coalition()) {
    auto it = partials.find(id);
    if (it == partials.end()) {
      missing.push_back(id);
      continue;
    }
    auto pk = pk_shares.find(id);
    if (pk == pk_shares.end() || !verify_partial(package, gc, id, it->second, pk->second)) {
      invalid.push_back(id);
      continue;
    }
    z += it->second;
  }
  if (!invalid.empty()) return Abort{AbortKind::InvalidPartial, invalid};
  if (!missing.empty()) return Abort{AbortKind::MissingPartial, missing};
  return Signature<G>{gc.R, z};
}

/// Honest in-memory signing session over an existing key: every coalition
/// member preprocesses one pair, signs, and the partials are aggregated.
template <PrimeOrderGroup G>
Outcome<Signature<G>> run_signing(const std::vector<DkgKeys<G>>& keys,
                                  const std::vector<ParticipantId>& coalition, ByteView message,
                                  const SeededRng& rng) {
  std::map<ParticipantId, Signer<G>> signers;
  std::map<ParticipantId, NonceCommitment<G>> commitments;
  for (auto id : coalition) {
    auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.id == id; });
    if (it == keys.end()) throw std::invalid_argument("no key share for coalition member");
    auto node_rng = rng.fork("sign/" + std::to_string(id));
    auto& signer = signers.emplace(id, Signer<G>(*it)).first->second;
    commitments[id] = signer.sign_round1(1, node_rng).pairs.front();
  }
  SigningPackage<G> package(Bytes(message.begin(), message.end()), commitments);
  std::map<ParticipantId, typename G::Scalar> partials;
  for (auto& [id, signer] : signers) partials[id] = signer.sign_round2_partial(package);
  const auto& k0 = keys.front();
  return aggregate(package, partials, k0.peer_pk_shares, k0.group_pk);
}

}  // namespace trustmesh
