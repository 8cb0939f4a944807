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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trustmesh/group.hpp"
#include "trustmesh/hash.hpp"
#include "trustmesh/outcome.hpp"
#include "trustmesh/polynomial.hpp"
#include "trustmesh/secret_sharing.hpp"

namespace trustmesh {

/// Run-scoped reference string bound into every proof of knowledge.
inline Bytes default_crs(std::string_view domain, std::uint64_t epoch) {
  Bytes material;
  append(material, as_bytes("trustmesh/crs"));
  append_u64_be(material, domain.size());
  append(material, as_bytes(domain));
  append_u64_be(material, epoch);
  auto digest = sha512(material);
  return Bytes(digest.begin(), digest.begin() + 32);
}

/// Schnorr proof of knowledge of the dealer secret s: (R = k*G, mu = k + s*c)
/// with c = H(id, crs, s*G, R).
template <PrimeOrderGroup G>
struct ProofOfKnowledge {
  typename G::Element commitment;
  typename G::Scalar response;

  [[nodiscard]] Bytes encode() const {
    Bytes out = commitment.to_bytes();
    append(out, response.to_bytes());
    return out;
  }
  friend bool operator==(const ProofOfKnowledge&, const ProofOfKnowledge&) = default;
};

template <PrimeOrderGroup G>
typename G::Scalar pok_challenge(ParticipantId id, ByteView crs,
                                 const typename G::Element& public_secret,
                                 const typename G::Element& nonce_commitment) {
  Bytes id_bytes;
  append_u32_be(id_bytes, id);
  const auto pub = public_secret.to_bytes();
  const auto r = nonce_commitment.to_bytes();
  return hash_to_scalar<G>(kTagPok, {ByteView(id_bytes), crs, ByteView(pub), ByteView(r)});
}

template <PrimeOrderGroup G>
ProofOfKnowledge<G> prove_knowledge(ParticipantId id, ByteView crs,
                                    const typename G::Scalar& secret, SeededRng& rng) {
  const auto k = random_nonzero<G>(rng);
  const auto r = G::mul_generator(k);
  const auto c = pok_challenge<G>(id, crs, G::mul_generator(secret), r);
  return {r, k + secret * c};
}

/// response*G == R + c*public_secret.
template <PrimeOrderGroup G>
bool verify_knowledge(ParticipantId id, ByteView crs, const typename G::Element& public_secret,
                      const ProofOfKnowledge<G>& proof) {
  const auto c = pok_challenge<G>(id, crs, public_secret, proof.commitment);
  return G::mul_generator(proof.response) == proof.commitment + c * public_secret;
}

template <PrimeOrderGroup G>
struct DkgRound1Broadcast {
  ParticipantId sender = 0;
  CommitmentVector<G> commitment;
  ProofOfKnowledge<G> proof;

  [[nodiscard]] Bytes encode() const {
    Bytes out;
    append_u32_be(out, sender);
    append_u32_be(out, static_cast<std::uint32_t>(commitment.size()));
    append(out, commitment.encode());
    append(out, proof.encode());
    return out;
  }
  friend bool operator==(const DkgRound1Broadcast&, const DkgRound1Broadcast&) = default;
};

/// nullopt when every member's broadcast is present, has t commitment
/// entries, and carries a valid proof; otherwise the abort naming them.
template <PrimeOrderGroup G>
std::optional<Abort> dkg_verify_round1(
    const std::map<ParticipantId, DkgRound1Broadcast<G>>& broadcasts,
    const std::vector<ParticipantId>& members, std::size_t t, ByteView crs) {
  std::vector<ParticipantId> missing, bad_shape, bad_proof;
  for (auto id : members) {
    auto it = broadcasts.find(id);
    if (it == broadcasts.end()) {
      missing.push_back(id);
      continue;
    }
    const auto& b = it->second;
    if (b.sender != id || b.commitment.size() != t) {
      bad_shape.push_back(id);
    } else if (!verify_knowledge<G>(id, crs, b.commitment.entries[0], b.proof)) {
      bad_proof.push_back(id);
    }
  }
  if (!missing.empty()) return Abort{AbortKind::MissingMessage, missing};
  if (!bad_proof.empty()) return Abort{AbortKind::InvalidProof, bad_proof};
  if (!bad_shape.empty()) return Abort{AbortKind::InvalidCommitment, bad_shape};
  return std::nullopt;
}

/// Everything a participant keeps after key generation.
template <PrimeOrderGroup G>
struct DkgKeys {
  ParticipantId id = 0;
  std::vector<ParticipantId> members;
  std::size_t threshold = 0;
  typename G::Scalar sk_share;
  typename G::Element pk_share;
  typename G::Element group_pk;
  /// Verification share of every member, derived from the broadcasts.
  std::map<ParticipantId, typename G::Element> peer_pk_shares;
};

enum class DkgPhase { Init, Round1Done, Round1Verified, Round2Done, Aborted };

inline const char* to_string(DkgPhase p) {
  switch (p) {
    case DkgPhase::Init: return "init";
    case DkgPhase::Round1Done: return "round1_done";
    case DkgPhase::Round1Verified: return "round1_verified";
    case DkgPhase::Round2Done: return "round2_done";
    case DkgPhase::Aborted: return "aborted";
  }
  return "unknown";
}

/// One node's state for two-round leaderless key generation. Each member
/// deals a degree t-1 polynomial, so any t signing shares reconstruct.
/// Phases only move forward; Aborted is terminal.
template <PrimeOrderGroup G>
class DkgParticipant {
 public:
  using Scalar = typename G::Scalar;
  using Element = typename G::Element;
  using Broadcast = DkgRound1Broadcast<G>;

  DkgParticipant(ParticipantId id, std::vector<ParticipantId> members, std::size_t t, Bytes crs)
      : id_(id), members_(std::move(members)), t_(t), crs_(std::move(crs)) {
    std::sort(members_.begin(), members_.end());
    detail::check_distinct_ids(members_);
    for (auto m : members_) id_scalar<G>(m);
    if (std::find(members_.begin(), members_.end(), id_) == members_.end()) {
      throw std::invalid_argument("participant is not a member");
    }
    if (t_ < 1 || t_ > members_.size()) throw std::invalid_argument("dkg requires 1 <= t <= n");
  }

  /// Samples f_j, commits to its coefficients and proves knowledge of s_j.
  Broadcast round1(SeededRng& rng) {
    require(DkgPhase::Init, "round1");
    std::vector<Scalar> coeffs;
    for (std::size_t i = 0; i < t_; ++i) coeffs.push_back(Scalar::random(rng));
    polynomial_ = Polynomial<G>(std::move(coeffs));
    Broadcast b{id_, feldman_commit(polynomial_),
                prove_knowledge<G>(id_, crs_, polynomial_.constant_term(), rng)};
    phase_ = DkgPhase::Round1Done;
    return b;
  }

  /// Checks every member's proof, keeps the commitments and drops the proofs.
  std::optional<Abort> verify_round1(const std::map<ParticipantId, Broadcast>& broadcasts) {
    require(DkgPhase::Round1Done, "verify_round1");
    if (auto abort = dkg_verify_round1<G>(broadcasts, members_, t_, crs_)) {
      return fail(*abort);
    }
    for (auto id : members_) commitments_[id] = broadcasts.at(id).commitment;
    phase_ = DkgPhase::Round1Verified;
    return std::nullopt;
  }

  /// f_j(recipient) for every other member; the self-share is retained.
  std::vector<std::pair<ParticipantId, Scalar>> round2_send() {
    require(DkgPhase::Round1Verified, "round2_send");
    std::vector<std::pair<ParticipantId, Scalar>> out;
    for (auto peer : members_) {
      if (peer == id_) {
        self_share_ = polynomial_.at(id_);
      } else {
        out.emplace_back(peer, polynomial_.at(peer));
      }
    }
    return out;
  }

  /// Verifies each received share against its sender's commitment, sums
  /// them into sk_j and derives the public keys. Received shares are wiped.
  Outcome<DkgKeys<G>> round2_finalize(const std::map<ParticipantId, Scalar>& shares) {
    require(DkgPhase::Round1Verified, "round2_finalize");
    if (!self_share_) throw std::logic_error("round2_send must run before round2_finalize");
    received_ = shares;
    received_.emplace(id_, *self_share_);

    std::vector<ParticipantId> missing, invalid;
    const auto me = id_scalar<G>(id_);
    for (auto sender : members_) {
      auto it = received_.find(sender);
      if (it == received_.end()) {
        missing.push_back(sender);
        continue;
      }
      const auto& c = commitments_.at(sender).entries;
      if (!(G::mul_generator(it->second) == evaluate_in_exponent<G>(c, me))) {
        invalid.push_back(sender);
      }
    }
    if (!missing.empty()) return fail(Abort{AbortKind::MissingMessage, missing});
    if (!invalid.empty()) return fail(Abort{AbortKind::InvalidShare, invalid});

    DkgKeys<G> keys;
    keys.id = id_;
    keys.members = members_;
    keys.threshold = t_;
    keys.sk_share = Scalar::zero();
    for (const auto& [sender, mu] : received_) keys.sk_share += mu;
    keys.pk_share = G::mul_generator(keys.sk_share);

    std::vector<Element> summed(t_, Element::identity());
    for (const auto& [sender, c] : commitments_) {
      for (std::size_t k = 0; k < t_; ++k) summed[k] += c.entries[k];
    }
    keys.group_pk = summed[0];
    for (auto peer : members_) {
      keys.peer_pk_shares[peer] =
          peer == id_ ? keys.pk_share : evaluate_in_exponent<G>(summed, id_scalar<G>(peer));
    }

    wipe();
    keys_ = keys;
    phase_ = DkgPhase::Round2Done;
    return keys;
  }

  [[nodiscard]] ParticipantId id() const { return id_; }
  [[nodiscard]] const std::vector<ParticipantId>& members() const { return members_; }
  [[nodiscard]] std::size_t threshold() const { return t_; }
  [[nodiscard]] const Bytes& crs() const { return crs_; }
  [[nodiscard]] DkgPhase phase() const { return phase_; }
  [[nodiscard]] const std::optional<Abort>& abort_reason() const { return abort_; }
  [[nodiscard]] std::size_t received_share_count() const { return received_.size(); }
  [[nodiscard]] const std::optional<DkgKeys<G>>& keys() const { return keys_; }
  [[nodiscard]] const Polynomial<G>& own_polynomial() const { return polynomial_; }

 private:
  void require(DkgPhase expected, const char* op) const {
    if (phase_ != expected) {
      throw std::logic_error(std::string(op) + " called in phase " + to_string(phase_));
    }
  }

  Abort fail(Abort abort) {
    phase_ = DkgPhase::Aborted;
    abort_ = abort;
    wipe();
    return abort;
  }

  void wipe() {
    for (auto& [id, mu] : received_) mu = Scalar::zero();
    received_.clear();
    if (self_share_) *self_share_ = Scalar::zero();
    self_share_.reset();
    if (!polynomial_.coefficients().empty()) polynomial_.wipe();
  }

  ParticipantId id_;
  std::vector<ParticipantId> members_;
  std::size_t t_;
  Bytes crs_;
  DkgPhase phase_ = DkgPhase::Init;
  Polynomial<G> polynomial_;
  std::map<ParticipantId, CommitmentVector<G>> commitments_;
  std::map<ParticipantId, Scalar> received_;
  std::optional<Scalar> self_share_;
  std::optional<DkgKeys<G>> keys_;
  std::optional<Abort> abort_;
};

/// Honest in-memory run of both rounds among all members. Each member draws
/// from rng.fork("dkg/<id>").
template <PrimeOrderGroup G>
Outcome<std::vector<DkgKeys<G>>> run_dkg(const std::vector<ParticipantId>& members,
                                         std::size_t t, const Bytes& crs, const SeededRng& rng) {
  std::vector<DkgParticipant<G>> nodes;
  for (auto id : members) nodes.emplace_back(id, members, t, crs);
  std::map<ParticipantId, DkgRound1Broadcast<G>> broadcasts;
  for (auto& node : nodes) {
    auto node_rng = rng.fork("dkg/" + std::to_string(node.id()));
    broadcasts.emplace(node.id(), node.round1(node_rng));
  }
  for (auto& node : nodes) {
    if (auto abort = node.verify_round1(broadcasts)) return *abort;
  }
  std::map<ParticipantId, std::map<ParticipantId, typename G::Scalar>> inbox;
  for (auto& node : nodes) {
    for (auto& [to, mu] : node.round2_send()) inbox[to][node.id()] = mu;
  }
  std::vector<DkgKeys<G>> keys;
  for (auto& node : nodes) {
    auto result = node.round2_finalize(inbox[node.id()]);
    if (!result) return result.abort();
    keys.push_back(std::move(result).value());
  }
  return keys;
}

}  // namespace trustmesh
