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

#include <gtest/gtest.h>

#include "toy_oracle.hpp"
#include "trustmesh/ristretto255.hpp"
#include "trustmesh/signing.hpp"
#include "trustmesh/toy_group.hpp"

namespace tms = trustmesh;
namespace to = toy_oracle;
using tms::Ristretto255;
using tms::ToyGroup;
using RS = Ristretto255::Scalar;
using TS = ToyGroup::Scalar;

namespace {

const tms::Bytes kCrs = tms::default_crs("signing-test", 1);

template <class G>
std::vector<tms::DkgKeys<G>> keygen(std::size_t t, std::size_t n, std::uint64_t seed) {
  return tms::run_dkg<G>(tms::id_range(n), t, kCrs, tms::SeededRng(seed)).value();
}

template <class G>
struct Session {
  std::map<tms::ParticipantId, tms::Signer<G>> signers;
  std::optional<tms::SigningPackage<G>> package;
  std::map<tms::ParticipantId, typename G::Scalar> partials;
};

template <class G>
Session<G> sign_all(const std::vector<tms::DkgKeys<G>>& keys,
                    const std::vector<tms::ParticipantId>& coalition, const tms::Bytes& msg,
                    std::uint64_t seed) {
  Session<G> s;
  tms::SeededRng rng(seed);
  std::map<tms::ParticipantId, tms::NonceCommitment<G>> commitments;
  for (auto id : coalition) {
    auto& signer = s.signers.emplace(id, tms::Signer<G>(keys[id - 1])).first->second;
    commitments[id] = signer.sign_round1(2, rng).pairs.front();
  }
  s.package.emplace(msg, commitments);
  for (auto& [id, signer] : s.signers) s.partials[id] = signer.sign_round2_partial(*s.package);
  return s;
}

tms::Bytes msg(std::string_view s) { return tms::Bytes(s.begin(), s.end()); }

}  // namespace

TEST(Signing, EveryCoalitionOfSizeTAndTPlusOneVerifies) {
  for (auto [t, n] : {std::pair{2, 3}, {3, 5}, {3, 6}}) {
    const auto keys = keygen<Ristretto255>(t, n, 10 + n);
    const auto pk = keys[0].group_pk;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
      if (size != static_cast<std::size_t>(t) && size != static_cast<std::size_t>(t) + 1) continue;
      std::vector<tms::ParticipantId> coalition;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) coalition.push_back(i + 1);
      }
      const auto m = msg("coalition " + std::to_string(mask));
      auto sig = tms::run_signing<Ristretto255>(keys, coalition, m, tms::SeededRng(mask));
      ASSERT_TRUE(sig.ok());
      EXPECT_TRUE(tms::verify<Ristretto255>(pk, m, sig.value()));
      EXPECT_FALSE(tms::verify<Ristretto255>(pk, msg("other"), sig.value()));
    }
  }
}

TEST(Signing, ToySignaturesCheckAgainstOracle) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 7;
    const std::size_t t = 2 + seed % (n - 1);
    const auto keys = keygen<ToyGroup>(t, n, seed);
    std::vector<tms::ParticipantId> coalition = tms::SeededRng(seed).sample(tms::id_range(n), t);
    std::sort(coalition.begin(), coalition.end());
    const auto m = msg("toy " + std::to_string(seed));
    auto s = sign_all<ToyGroup>(keys, coalition, m, seed);
    const auto sig = tms::aggregate(*s.package, s.partials, keys[0].peer_pk_shares,
                                    keys[0].group_pk).value();
    const auto c = tms::signature_challenge<ToyGroup>(sig.R, keys[0].group_pk, m).value();
    EXPECT_EQ(to::gpow(sig.z.value()),
              to::emul(sig.R.residue(), to::epow(keys[0].group_pk.residue(), c)));

    // z is the sum of partials and R the sum of A_l + beta_l B_l, recomputed here.
    std::int64_t z = 0, r = 1;
    for (auto id : coalition) {
      z = to::sadd(z, s.partials[id].value());
      const auto& pair = s.package->commitments().at(id);
      const auto beta = tms::binding_factor(*s.package, id).value();
      r = to::emul(r, to::emul(pair.A.residue(), to::epow(pair.B.residue(), beta)));
    }
    EXPECT_EQ(sig.z.value(), z);
    EXPECT_EQ(sig.R.residue(), r);
  }
}

TEST(Signing, ForcedNonceToyOracle) {
  const auto m = msg("forced");
  for (std::uint64_t sk = 0; sk < to::Q; ++sk) {
    for (std::uint64_t r = 0; r < to::Q; ++r) {
      const auto sig =
          tms::single_party_sign_with_nonce<ToyGroup>(TS::from_u64(sk), m, TS::from_u64(r));
      const auto pk = ToyGroup::mul_generator(TS::from_u64(sk));
      EXPECT_EQ(sig.R.residue(), to::gpow(r));
      const auto c = tms::signature_challenge<ToyGroup>(sig.R, pk, m).value();
      EXPECT_EQ(sig.z.value(), to::sadd(r, to::smul(sk, c)));
      EXPECT_TRUE(tms::verify<ToyGroup>(pk, m, sig));
    }
  }
}

TEST(Signing, ZeroSecretKeySignsTrivially) {
  tms::SeededRng rng(3);
  const auto sig = tms::single_party_sign<Ristretto255>(RS::zero(), msg("m"), rng);
  const auto pk = Ristretto255::mul_generator(RS::zero());
  EXPECT_TRUE(pk.is_identity());
  EXPECT_EQ(Ristretto255::mul_generator(sig.z), sig.R);
  EXPECT_TRUE(tms::verify<Ristretto255>(pk, msg("m"), sig));
}

TEST(Signing, SinglePartyRoundTrip) {
  tms::SeededRng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto sk = RS::random(rng);
    const auto pk = Ristretto255::mul_generator(sk);
    const auto m = msg("message " + std::to_string(i));
    const auto sig = tms::single_party_sign<Ristretto255>(sk, m, rng);
    EXPECT_TRUE(tms::verify<Ristretto255>(pk, m, sig));
    const auto decoded = tms::Signature<Ristretto255>::decode(sig.encode());
    ASSERT_TRUE(decoded.has_value());
    EXPECT_EQ(*decoded, sig);
  }
  EXPECT_FALSE(tms::Signature<Ristretto255>::decode(tms::Bytes(63)).has_value());
}

TEST(Signing, EveryBitFlipIsRejected) {
  const auto keys = keygen<Ristretto255>(2, 3, 5);
  const auto m = msg("flip me");
  const auto sig = tms::run_signing<Ristretto255>(keys, {1, 3}, m, tms::SeededRng(5)).value();
  const auto bytes = sig.encode();
  ASSERT_EQ(bytes.size(), 64u);
  for (std::size_t bit = 0; bit < bytes.size() * 8; ++bit) {
    auto flipped = bytes;
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    auto decoded = tms::Signature<Ristretto255>::decode(flipped);
    EXPECT_TRUE(!decoded || !tms::verify<Ristretto255>(keys[0].group_pk, m, *decoded)) << bit;
  }
  for (std::size_t bit = 0; bit < m.size() * 8; ++bit) {
    auto other = m;
    other[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_FALSE(tms::verify<Ristretto255>(keys[0].group_pk, other, sig)) << bit;
  }
}

TEST(Signing, CorruptedPartialAbortsNamingSigner) {
  const auto keys = keygen<Ristretto255>(3, 5, 6);
  auto s = sign_all<Ristretto255>(keys, {1, 2, 4}, msg("m"), 6);
  s.partials[2] += RS::one();
  auto r = tms::aggregate(*s.package, s.partials, keys[0].peer_pk_shares, keys[0].group_pk);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.abort().kind, tms::AbortKind::InvalidPartial);
  EXPECT_EQ(r.abort().culprits, std::vector<tms::ParticipantId>{2});

  s.partials[2] -= RS::one();
  s.partials.erase(4);
  auto missing = tms::aggregate(*s.package, s.partials, keys[0].peer_pk_shares, keys[0].group_pk);
  ASSERT_FALSE(missing.ok());
  EXPECT_EQ(missing.abort().kind, tms::AbortKind::MissingPartial);
  EXPECT_EQ(missing.abort().culprits, std::vector<tms::ParticipantId>{4});
}

TEST(Signing, ExhaustiveToyPartialSoundness) {
  const auto keys = keygen<ToyGroup>(3, 6, 7);
  const auto m = msg("exhaustive");
  auto s = sign_all<ToyGroup>(keys, {2, 3, 5}, m, 7);
  const auto gc = tms::group_commitment(*s.package, keys[0].group_pk);
  const std::vector<std::int64_t> coalition{2, 3, 5};
  for (auto id : s.package->coalition()) {
    const auto pk_share = keys[0].peer_pk_shares.at(id).residue();
    const auto lambda = to::lagrange(id, coalition, 0);
    const auto exponent = to::smul(gc.challenge.value(), lambda);
    int accepted = 0;
    for (std::uint64_t z = 0; z < to::Q; ++z) {
      const bool oracle =
          to::gpow(z) == to::emul(gc.per_signer.at(id).residue(), to::epow(pk_share, exponent));
      const bool ok = tms::verify_partial(*s.package, gc, id, TS::from_u64(z),
                                          keys[0].peer_pk_shares.at(id));
      EXPECT_EQ(ok, oracle);
      accepted += ok;
      EXPECT_EQ(ok, TS::from_u64(z) == s.partials[id]);
    }
    EXPECT_EQ(accepted, 1);
  }
}

TEST(Signing, NonceReuseIsRefusedAndNoncesWiped) {
  const auto keys = keygen<Ristretto255>(2, 3, 8);
  tms::Signer<Ristretto255> a(keys[0]), b(keys[1]);
  tms::SeededRng rng(8);
  const auto ca = a.sign_round1(1, rng).pairs.front();
  const auto cb = b.sign_round1(1, rng).pairs.front();
  EXPECT_EQ(a.unused_nonces(), 1u);
  EXPECT_TRUE(a.held_nonces(ca).has_value());
  tms::SigningPackage<Ristretto255> pkg(msg("one"), {{1, ca}, {2, cb}});
  (void)a.sign_round2_partial(pkg);
  EXPECT_EQ(a.unused_nonces(), 0u);
  EXPECT_FALSE(a.held_nonces(ca).has_value());
  EXPECT_FALSE(a.next_commitment().has_value());
  EXPECT_THROW(a.sign_round2_partial(pkg), tms::NonceReuseError);
  tms::SigningPackage<Ristretto255> other(msg("two"), {{1, ca}, {2, cb}});
  EXPECT_THROW(a.sign_round2_partial(other), tms::NonceReuseError);
}

TEST(Signing, PackageValidation) {
  const auto keys = keygen<Ristretto255>(3, 4, 9);
  tms::Signer<Ristretto255> a(keys[0]), b(keys[1]);
  tms::SeededRng rng(9);
  const auto ca = a.sign_round1(1, rng).pairs.front();
  const auto cb = b.sign_round1(1, rng).pairs.front();
  // Below the threshold.
  EXPECT_THROW(a.sign_round2_partial({msg("m"), {{1, ca}, {2, cb}}}), std::invalid_argument);
  // Not a member of the package.
  EXPECT_THROW(a.sign_round2_partial({msg("m"), {{2, cb}, {3, cb}, {4, cb}}}),
               std::invalid_argument);
  // Someone else's commitment under our id.
  EXPECT_THROW(a.sign_round2_partial({msg("m"), {{1, cb}, {2, ca}, {3, cb}}}),
               std::invalid_argument);
  // Member outside the key's group.
  EXPECT_THROW(a.sign_round2_partial({msg("m"), {{1, ca}, {2, cb}, {9, cb}}}),
               std::invalid_argument);
  EXPECT_THROW(tms::SigningPackage<Ristretto255>(msg("m"), {}), std::invalid_argument);
  EXPECT_EQ(a.unused_nonces(), 1u);
}

TEST(Signing, BindingFactorsTieEachSignerToTheWholePackage) {
  const auto keys = keygen<Ristretto255>(2, 3, 10);
  auto s = sign_all<Ristretto255>(keys, {1, 2}, msg("bound"), 10);
  const auto& base = *s.package;
  const auto b1 = tms::binding_factor(base, 1);
  EXPECT_NE(b1, tms::binding_factor(base, 2));

  tms::SigningPackage<Ristretto255> other_msg(msg("unbound"), base.commitments());
  EXPECT_NE(b1, tms::binding_factor(other_msg, 1));

  // Swapping the other signer's pair changes this signer's binding factor.
  auto swapped = base.commitments();
  std::swap(swapped.at(2).A, swapped.at(2).B);
  tms::SigningPackage<Ristretto255> cross(msg("bound"), swapped);
  EXPECT_NE(b1, tms::binding_factor(cross, 1));

  // Partials from one package do not aggregate under another.
  auto r = tms::aggregate(cross, s.partials, keys[0].peer_pk_shares, keys[0].group_pk);
  EXPECT_FALSE(r.ok());
  auto m = tms::aggregate(other_msg, s.partials, keys[0].peer_pk_shares, keys[0].group_pk);
  ASSERT_FALSE(m.ok());
  EXPECT_EQ(m.abort().culprits, (std::vector<tms::ParticipantId>{1, 2}));
}

TEST(Signing, PackageIndependentOfInsertionOrder) {
  const auto keys = keygen<Ristretto255>(3, 3, 11);
  auto s = sign_all<Ristretto255>(keys, {1, 2, 3}, msg("order"), 11);
  const auto& c = s.package->commitments();
  std::map<tms::ParticipantId, tms::NonceCommitment<Ristretto255>> reversed;
  for (auto it = c.rbegin(); it != c.rend(); ++it) reversed.insert(*it);
  tms::SigningPackage<Ristretto255> again(msg("order"), reversed);
  EXPECT_EQ(again.encoded_commitments(), s.package->encoded_commitments());
  EXPECT_EQ(again.context_hash(), s.package->context_hash());
  const auto sig = tms::aggregate(again, s.partials, keys[0].peer_pk_shares, keys[0].group_pk);
  ASSERT_TRUE(sig.ok());
  EXPECT_TRUE(tms::verify<Ristretto255>(keys[0].group_pk, msg("order"), sig.value()));
}

TEST(Signing, ThresholdOneIsPlainSchnorr) {
  const auto keys = keygen<Ristretto255>(1, 3, 12);
  for (tms::ParticipantId id = 1; id <= 3; ++id) {
    EXPECT_EQ(keys[id - 1].pk_share, keys[0].group_pk);
    auto sig = tms::run_signing<Ristretto255>(keys, {id}, msg("solo"), tms::SeededRng(id));
    ASSERT_TRUE(sig.ok());
    EXPECT_TRUE(tms::verify<Ristretto255>(keys[0].group_pk, msg("solo"), sig.value()));
  }
}
