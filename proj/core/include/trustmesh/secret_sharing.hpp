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

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trustmesh/group.hpp"
#include "trustmesh/polynomial.hpp"

namespace trustmesh {

/// One indexed share. Pedersen shares also carry the blinding value.
///
/// Wire format: 4-byte big-endian id || scalar [|| blinding scalar].
template <PrimeOrderGroup G>
struct SharePacket {
  using Scalar = typename G::Scalar;

  ParticipantId id = 0;
  Scalar value{};
  std::optional<Scalar> blinding;

  [[nodiscard]] Bytes encode() const {
    Bytes out;
    append_u32_be(out, id);
    append(out, value.to_bytes());
    if (blinding) append(out, blinding->to_bytes());
    return out;
  }

  static SharePacket decode(ByteView bytes) {
    constexpr std::size_t plain = 4 + G::kScalarBytes;
    constexpr std::size_t blinded = plain + G::kScalarBytes;
    if (bytes.size() != plain && bytes.size() != blinded) {
      throw std::invalid_argument("share packet has wrong length");
    }
    SharePacket p;
    p.id = read_u32_be(bytes);
    if (p.id == 0) throw std::invalid_argument("share packet id must be >= 1");
    p.value = decode_scalar<G>(bytes.subspan(4, G::kScalarBytes));
    if (bytes.size() == blinded) p.blinding = decode_scalar<G>(bytes.subspan(plain));
    return p;
  }

  friend bool operator==(const SharePacket&, const SharePacket&) = default;
};

/// Group-element commitments to polynomial coefficients, entry k for x^k.
template <PrimeOrderGroup G>
struct CommitmentVector {
  std::vector<typename G::Element> entries;

  [[nodiscard]] std::size_t size() const { return entries.size(); }

  [[nodiscard]] Bytes encode() const {
    Bytes out;
    for (const auto& e : entries) append(out, e.to_bytes());
    return out;
  }

  static CommitmentVector decode(ByteView bytes) {
    if (bytes.empty() || bytes.size() % G::kElementBytes != 0) {
      throw std::invalid_argument("commitment vector has wrong length");
    }
    CommitmentVector v;
    for (std::size_t off = 0; off < bytes.size(); off += G::kElementBytes) {
      v.entries.push_back(decode_element<G>(bytes.subspan(off, G::kElementBytes)));
    }
    return v;
  }

  /// sum_k id^k * entries[k]: the commitment to the polynomial at id.
  [[nodiscard]] typename G::Element evaluate(ParticipantId id) const {
    return evaluate_in_exponent<G>(entries, id_scalar<G>(id));
  }

  friend bool operator==(const CommitmentVector&, const CommitmentVector&) = default;
};

namespace detail {
template <PrimeOrderGroup G>
void check_share_params(std::size_t degree, std::size_t n) {
  if (degree < 1) throw std::invalid_argument("threshold degree must be at least 1");
  if (degree >= n) throw std::invalid_argument("threshold degree must be below share count");
  if (n > G::kMaxParticipantId) {
    throw std::invalid_argument("share count must be below the group order");
  }
}
}  // namespace detail

// ---------------------------------------------------------------- Shamir

/// Shares f(id) for each recipient id.
template <PrimeOrderGroup G>
std::vector<SharePacket<G>> shares_of(const Polynomial<G>& f, std::span<const ParticipantId> ids) {
  detail::check_distinct_ids(ids);
  std::vector<SharePacket<G>> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back({id, f.at(id), std::nullopt});
  return out;
}

template <PrimeOrderGroup G>
std::vector<SharePacket<G>> shares_of(const Polynomial<G>& f, std::size_t n) {
  return shares_of(f, std::span<const ParticipantId>(id_range(n)));
}

/// Degree-t sharing of secret into n shares; any t+1 reconstruct.
template <PrimeOrderGroup G>
std::vector<SharePacket<G>> shamir_split(const typename G::Scalar& secret, std::size_t t,
                                         std::size_t n, SeededRng& rng) {
  detail::check_share_params<G>(t, n);
  return shares_of(Polynomial<G>::random(secret, t, rng), n);
}

/// Interpolates the shares at 0. Cannot tell whether enough shares were
/// supplied: an undersized set silently yields a wrong value.
template <PrimeOrderGroup G>
typename G::Scalar shamir_combine(const std::vector<SharePacket<G>>& shares) {
  std::vector<std::pair<ParticipantId, typename G::Scalar>> points;
  points.reserve(shares.size());
  for (const auto& s : shares) points.emplace_back(s.id, s.value);
  return interpolate_at<G>(points, G::Scalar::zero());
}

/// As above, but refuses fewer than degree+1 shares.
template <PrimeOrderGroup G>
typename G::Scalar shamir_combine(const std::vector<SharePacket<G>>& shares,
                                  std::size_t degree) {
  if (shares.size() < degree + 1) {
    throw std::invalid_argument("cannot recover from " + std::to_string(shares.size()) +
                                " shares; need " + std::to_string(degree + 1));
  }
  return shamir_combine<G>(shares);
}

// --------------------------------------------------------------- Feldman

template <PrimeOrderGroup G>
struct FeldmanDeal {
  CommitmentVector<G> commitments;
  std::vector<SharePacket<G>> shares;
};

template <PrimeOrderGroup G>
CommitmentVector<G> feldman_commit(const Polynomial<G>& f) {
  CommitmentVector<G> c;
  c.entries.reserve(f.coefficients().size());
  for (const auto& a : f.coefficients()) c.entries.push_back(G::mul_generator(a));
  return c;
}

template <PrimeOrderGroup G>
FeldmanDeal<G> feldman_deal(const Polynomial<G>& f, std::size_t n) {
  detail::check_share_params<G>(f.degree(), n);
  return {feldman_commit(f), shares_of(f, n)};
}

template <PrimeOrderGroup G>
FeldmanDeal<G> feldman_split(const typename G::Scalar& secret, std::size_t t, std::size_t n,
                             SeededRng& rng) {
  detail::check_share_params<G>(t, n);
  return feldman_deal(Polynomial<G>::random(secret, t, rng), n);
}

/// value*G == sum_k id^k * c_k.
template <PrimeOrderGroup G>
bool feldman_verify(const SharePacket<G>& share, const CommitmentVector<G>& commitments) {
  if (share.id == 0 || share.id > G::kMaxParticipantId || commitments.entries.empty()) {
    return false;
  }
  return G::mul_generator(share.value) == commitments.evaluate(share.id);
}

// -------------------------------------------------------------- Pedersen

template <PrimeOrderGroup G>
struct PedersenDeal {
  CommitmentVector<G> commitments;
  std::vector<SharePacket<G>> shares;
};

/// entries[k] = f_k*G + g_k*H for value polynomial f and blinding polynomial g.
template <PrimeOrderGroup G>
CommitmentVector<G> pedersen_commit(const Polynomial<G>& f, const Polynomial<G>& g) {
  if (f.coefficients().size() != g.coefficients().size()) {
    throw std::invalid_argument("value and blinding polynomials differ in degree");
  }
  const auto h = G::blinding_generator();
  CommitmentVector<G> c;
  for (std::size_t k = 0; k < f.coefficients().size(); ++k) {
    c.entries.push_back(G::mul_generator(f.coefficients()[k]) + g.coefficients()[k] * h);
  }
  return c;
}

template <PrimeOrderGroup G>
PedersenDeal<G> pedersen_deal(const Polynomial<G>& f, const Polynomial<G>& g,
                              std::span<const ParticipantId> ids) {
  detail::check_share_params<G>(f.degree(), ids.size());
  detail::check_distinct_ids(ids);
  PedersenDeal<G> deal{pedersen_commit(f, g), {}};
  for (auto id : ids) deal.shares.push_back({id, f.at(id), g.at(id)});
  return deal;
}

template <PrimeOrderGroup G>
PedersenDeal<G> pedersen_deal(const Polynomial<G>& f, const Polynomial<G>& g, std::size_t n) {
  const auto ids = id_range(n);
  return pedersen_deal(f, g, std::span<const ParticipantId>(ids));
}

/// Draws the blinding polynomial with its own random constant term b.
template <PrimeOrderGroup G>
PedersenDeal<G> pedersen_split(const typename G::Scalar& secret, std::size_t t, std::size_t n,
                               SeededRng& rng) {
  detail::check_share_params<G>(t, n);
  auto f = Polynomial<G>::random(secret, t, rng);
  auto g = Polynomial<G>::random(G::Scalar::random(rng), t, rng);
  return pedersen_deal(f, g, n);
}

/// value*G + blinding*H == sum_k id^k * c_k. Throws if the share has no
/// blinding value.
template <PrimeOrderGroup G>
bool pedersen_verify(const SharePacket<G>& share, const CommitmentVector<G>& commitments) {
  if (!share.blinding) throw std::invalid_argument("pedersen share is missing its blinding value");
  if (share.id == 0 || share.id > G::kMaxParticipantId || commitments.entries.empty()) {
    return false;
  }
  const auto lhs = G::mul_generator(share.value) + *share.blinding * G::blinding_generator();
  return lhs == commitments.evaluate(share.id);
}

/// Blinding values of a Pedersen sharing, packaged as plain shares.
template <PrimeOrderGroup G>
std::vector<SharePacket<G>> blinding_components(const std::vector<SharePacket<G>>& shares) {
  std::vector<SharePacket<G>> out;
  for (const auto& s : shares) {
    if (!s.blinding) throw std::invalid_argument("share has no blinding value");
    out.push_back({s.id, *s.blinding, std::nullopt});
  }
  return out;
}

// ------------------------------------------------------------ complaints

enum class Verdict { DealerFaulty, AccuserFaulty };

inline const char* to_string(Verdict v) {
  return v == Verdict::DealerFaulty ? "DealerFaulty" : "AccuserFaulty";
}

/// A recipient's public claim that its share does not match the dealer's
/// commitments. The share is revealed so every observer can check it.
template <PrimeOrderGroup G>
struct Complaint {
  ParticipantId accuser = 0;
  SharePacket<G> share;
  CommitmentVector<G> commitments;
};

/// Pure function of the complaint, so all observers reach the same verdict.
template <PrimeOrderGroup G>
Verdict adjudicate_complaint(const Complaint<G>& complaint) {
  if (complaint.accuser != complaint.share.id) {
    throw std::invalid_argument("complaint accuser does not own the revealed share");
  }
  if (!complaint.share.blinding) return Verdict::AccuserFaulty;
  return pedersen_verify(complaint.share, complaint.commitments) ? Verdict::AccuserFaulty
                                                                 : Verdict::DealerFaulty;
}

}  // namespace trustmesh
