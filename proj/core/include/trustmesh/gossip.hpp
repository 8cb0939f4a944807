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
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "trustmesh/hash.hpp"
#include "trustmesh/signing.hpp"

namespace trustmesh {

/// Peers contacted per gossip round: min(n-1, ceil(c*log2 n)).
inline std::size_t gossip_fanout(std::size_t n, unsigned c) {
  if (n <= 1) return 0;
  const auto want = static_cast<std::size_t>(std::ceil(c * std::log2(static_cast<double>(n))));
  return std::min(n - 1, want);
}

struct GossipParams {
  unsigned c = 4;
  /// A complete node broadcasts with probability broadcast_num / n per round.
  std::uint64_t broadcast_num = 2;
  /// Contributions needed before a transcript can be aggregated. The
  /// package fixes R and the Lagrange weights over its whole coalition, so
  /// this must equal the coalition size; 0 means exactly that.
  std::size_t contributions_required = 0;
};

/// Mergeable set of verified partial signatures for one signing package.
template <PrimeOrderGroup G>
struct Transcript {
  std::string domain;
  Digest512 context{};
  std::map<ParticipantId, typename G::Scalar> contributions;

  [[nodiscard]] Bytes encode() const {
    Bytes out;
    append_u64_be(out, domain.size());
    append(out, as_bytes(domain));
    append(out, context);
    append_u32_be(out, static_cast<std::uint32_t>(contributions.size()));
    for (const auto& [id, z] : contributions) {
      append_u32_be(out, id);
      append(out, z.to_bytes());
    }
    return out;
  }

  /// Ordering key for agreeing on one of several broadcast transcripts:
  /// context hash first, then the hash of the full encoding.
  [[nodiscard]] std::pair<Digest512, Digest512> tie_break_key() const {
    return {context, sha512(encode())};
  }
};

template <PrimeOrderGroup G>
struct GossipReceipt {
  std::size_t merged = 0;
  std::vector<ParticipantId> dropped;
  bool context_mismatch = false;
};

/// One node's view of Protocol-3 style aggregation gossip for a single
/// signing package. Every node can aggregate; nobody is a designated
/// aggregator.
template <PrimeOrderGroup G>
class GossipNode {
 public:
  using Scalar = typename G::Scalar;
  using Element = typename G::Element;

  GossipNode(ParticipantId id, std::vector<ParticipantId> members, std::string domain,
             SigningPackage<G> package, Element group_pk,
             std::map<ParticipantId, Element> pk_shares, GossipParams params)
      : id_(id),
        members_(std::move(members)),
        package_(std::move(package)),
        group_pk_(group_pk),
        pk_shares_(std::move(pk_shares)),
        params_(params),
        gc_(group_commitment(package_, group_pk_)) {
    if (params_.contributions_required == 0) {
      params_.contributions_required = package_.coalition().size();
    }
    if (params_.contributions_required != package_.coalition().size()) {
      throw std::invalid_argument("contributions_required must equal the coalition size");
    }
    transcript_.domain = std::move(domain);
    transcript_.context = package_.context_hash();
  }

  /// Adds this node's own partial. Returns false if it fails the check.
  bool add_own_partial(const Scalar& z) { return accept(id_, z); }

  /// Sends the current transcript to fan-out peers chosen uniformly
  /// without replacement.
  std::vector<std::pair<ParticipantId, Transcript<G>>> gossip_round(SeededRng& rng) {
    std::vector<std::pair<ParticipantId, Transcript<G>>> out;
    if (finished() || transcript_.contributions.empty()) return out;
    std::vector<ParticipantId> peers;
    for (auto m : members_) {
      if (m != id_) peers.push_back(m);
    }
    for (auto peer : rng.sample(peers, gossip_fanout(members_.size(), params_.c))) {
      out.emplace_back(peer, transcript_);
    }
    return out;
  }

  /// Verifies each incoming contribution before merging; forged entries are
  /// dropped and their sender flagged.
  GossipReceipt<G> receive(ParticipantId from, const Transcript<G>& incoming) {
    GossipReceipt<G> r;
    if (incoming.context != transcript_.context || incoming.domain != transcript_.domain) {
      r.context_mismatch = true;
      flagged_.insert(from);
      return r;
    }
    for (const auto& [id, z] : incoming.contributions) {
      auto have = transcript_.contributions.find(id);
      if (have != transcript_.contributions.end() && have->second == z) continue;
      if (accept(id, z)) {
        ++r.merged;
      } else {
        r.dropped.push_back(id);
        flagged_.insert(from);
      }
    }
    return r;
  }

  [[nodiscard]] bool transcript_complete() const {
    return transcript_.contributions.size() >= params_.contributions_required;
  }

  /// With probability broadcast_num/n a complete node broadcasts its
  /// transcript and ends; the caller delivers it to everyone, this node
  /// included.
  std::optional<Transcript<G>> maybe_terminate(SeededRng& rng) {
    if (finished() || !transcript_complete()) return std::nullopt;
    if (!rng.bernoulli(params_.broadcast_num, members_.size())) return std::nullopt;
    return transcript_;
  }

  /// Adopts a broadcast transcript if it is valid, complete, and orders
  /// before any transcript adopted so far. Returns true if adopted.
  bool observe_broadcast(const Transcript<G>& t) {
    if (t.context != transcript_.context || t.domain != transcript_.domain) return false;
    if (adopted_ && !(t.tie_break_key() < adopted_->tie_break_key())) return false;
    std::map<ParticipantId, Scalar> partials;
    for (const auto& [id, z] : t.contributions) {
      auto have = transcript_.contributions.find(id);
      if (have != transcript_.contributions.end() && have->second == z) {
        partials[id] = z;
      } else if (check(id, z)) {
        partials[id] = z;
      } else {
        return false;
      }
    }
    if (partials.size() < params_.contributions_required) return false;
    // Each entry passed the partial check and belongs to the coalition, so
    // the entries are exactly the coalition's responses.
    auto z = Scalar::zero();
    for (const auto& [id, zi] : partials) z += zi;
    adopted_ = t;
    signature_ = Signature<G>{gc_.R, z};
    return true;
  }

  [[nodiscard]] ParticipantId id() const { return id_; }
  [[nodiscard]] bool finished() const { return adopted_.has_value(); }
  [[nodiscard]] const std::optional<Signature<G>>& signature() const { return signature_; }
  [[nodiscard]] const Transcript<G>& transcript() const { return transcript_; }
  [[nodiscard]] const std::set<ParticipantId>& flagged() const { return flagged_; }
  [[nodiscard]] const SigningPackage<G>& package() const { return package_; }
  [[nodiscard]] const GossipParams& params() const { return params_; }

 private:
  bool check(ParticipantId id, const Scalar& z) {
    if (!package_.contains(id)) return false;
    auto pk = pk_shares_.find(id);
    if (pk == pk_shares_.end()) return false;
    const auto key = std::make_pair(id, z.to_bytes());
    if (known_bad_.count(key)) return false;
    if (verify_partial(package_, gc_, id, z, pk->second)) return true;
    known_bad_.insert(key);
    return false;
  }

  bool accept(ParticipantId id, const Scalar& z) {
    if (!check(id, z)) return false;
    transcript_.contributions[id] = z;
    return true;
  }

  ParticipantId id_;
  std::vector<ParticipantId> members_;
  SigningPackage<G> package_;
  Element group_pk_;
  std::map<ParticipantId, Element> pk_shares_;
  GossipParams params_;
  GroupCommitment<G> gc_;
  Transcript<G> transcript_;
  std::set<ParticipantId> flagged_;
  std::set<std::pair<ParticipantId, Bytes>> known_bad_;
  std::optional<Transcript<G>> adopted_;
  std::optional<Signature<G>> signature_;
};

template <PrimeOrderGroup G>
struct GossipSessionResult {
  /// Round in which the first broadcast went out; nullopt if none did.
  std::optional<std::size_t> termination_round;
  std::size_t messages = 0;
  std::size_t broadcasts = 0;
  std::map<ParticipantId, std::optional<Signature<G>>> signatures;
};

/// Synchronous driver: every round each node with a non-empty transcript
/// gossips, messages are delivered, then complete nodes may broadcast.
/// A broadcast reaches every node at the end of its round.
template <PrimeOrderGroup G>
GossipSessionResult<G> run_gossip_session(const std::vector<DkgKeys<G>>& keys,
                                          const std::vector<ParticipantId>& coalition,
                                          ByteView message, GossipParams params,
                                          const SeededRng& rng, std::size_t max_rounds) {
  std::map<ParticipantId, Signer<G>> signers;
  std::map<ParticipantId, NonceCommitment<G>> commitments;
  for (auto id : coalition) {
    auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.id == id; });
    if (it == keys.end()) throw std::invalid_argument("no key share for coalition member");
    auto node_rng = rng.fork("nonce/" + std::to_string(id));
    auto& signer = signers.emplace(id, Signer<G>(*it)).first->second;
    commitments[id] = signer.sign_round1(1, node_rng).pairs.front();
  }
  SigningPackage<G> package(Bytes(message.begin(), message.end()), commitments);

  std::vector<ParticipantId> members;
  for (const auto& k : keys) members.push_back(k.id);
  std::map<ParticipantId, GossipNode<G>> nodes;
  std::map<ParticipantId, SeededRng> rngs;
  for (const auto& k : keys) {
    nodes.emplace(k.id, GossipNode<G>(k.id, members, "session", package, k.group_pk,
                                      k.peer_pk_shares, params));
    rngs.emplace(k.id, rng.fork("gossip/" + std::to_string(k.id)));
  }
  for (auto& [id, signer] : signers) {
    nodes.at(id).add_own_partial(signer.sign_round2_partial(package));
  }

  GossipSessionResult<G> result;
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    std::vector<std::tuple<ParticipantId, ParticipantId, Transcript<G>>> in_flight;
    for (auto& [id, node] : nodes) {
      for (auto& [peer, t] : node.gossip_round(rngs.at(id))) {
        in_flight.emplace_back(id, peer, std::move(t));
      }
    }
    result.messages += in_flight.size();
    for (const auto& [from, to, t] : in_flight) nodes.at(to).receive(from, t);

    std::vector<Transcript<G>> broadcasts;
    for (auto& [id, node] : nodes) {
      if (auto b = node.maybe_terminate(rngs.at(id))) broadcasts.push_back(std::move(*b));
    }
    if (!broadcasts.empty()) {
      result.termination_round = round;
      result.broadcasts = broadcasts.size();
      for (auto& [id, node] : nodes) {
        for (const auto& b : broadcasts) node.observe_broadcast(b);
      }
      break;
    }
  }
  for (const auto& [id, node] : nodes) result.signatures[id] = node.signature();
  return result;
}

}  // namespace trustmesh
