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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "toy_oracle.hpp"
#include "trustmesh/avss.hpp"
#include "trustmesh/dkg.hpp"
#include "trustmesh/gossip.hpp"
#include "trustmesh/ristretto255.hpp"
#include "trustmesh/secret_sharing.hpp"
#include "trustmesh/signing.hpp"
#include "trustmesh/sim/simulator.hpp"
#include "trustmesh/toy_group.hpp"

namespace tms = trustmesh;
namespace to = toy_oracle;
namespace fs = std::filesystem;
using tms::ParticipantId;
using tms::Ristretto255;
using tms::ToyGroup;
using RS = Ristretto255::Scalar;
using TS = ToyGroup::Scalar;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

bool run_criterion(int index, const std::string& name, double limit_s,
                   const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = secs < limit_s;
  const bool pass = v.pass && in_time;
  std::ostringstream line;
  line << (pass ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << v.detail;
  if (!in_time) line << "; exceeded time limit";
  line << std::fixed << std::setprecision(2) << " (" << secs << " s, limit " << limit_s << " s)";
  std::cout << line.str() << std::endl;
  return pass;
}

const tms::Bytes& crs() {
  static const auto c = tms::default_crs("acceptance", 1);
  return c;
}

std::vector<std::vector<ParticipantId>> subsets(const std::vector<ParticipantId>& ids,
                                                std::size_t k) {
  std::vector<std::vector<ParticipantId>> out;
  std::vector<bool> pick(ids.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<ParticipantId> s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (pick[i]) s.push_back(ids[i]);
    }
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

// ----------------------------------------------------------------- [1]

Verdict feldman_worked_example() {
  const auto f = tms::Polynomial<Ristretto255>::from_u64({5, 2, 4});
  const auto deal = tms::feldman_deal(f, 4);
  bool ok = deal.shares[0].value == RS::from_u64(11) && deal.shares[1].value == RS::from_u64(25) && deal.shares[2].value == RS::from_u64(47) &&
            deal.shares[3].value == RS::from_u64(77);
  for (const auto& s : deal.shares) ok = ok && tms::feldman_verify(s, deal.commitments);
  int recovered = 0, subsets_total = 0;
  for (const auto& ids : subsets({1, 2, 3, 4}, 3)) {
    std::vector<tms::SharePacket<Ristretto255>> pick;
    for (auto id : ids) pick.push_back(deal.shares[id - 1]);
    ++subsets_total;
    recovered += tms::shamir_combine(pick, 2) == RS::from_u64(5);
  }
  ok = ok && recovered == subsets_total;
  return {ok, "shares at ids 2,3,4 = 25,47,77; " + std::to_string(recovered) + "/" +
                  std::to_string(subsets_total) + " three-share subsets recover 5"};
}

// ----------------------------------------------------------------- [2]

struct Tally {
  std::map<std::string, std::pair<std::size_t, std::size_t>> rows;  // cases, mismatches
  void add(const std::string& what, bool lib, bool oracle) {
    auto& r = rows[what];
    ++r.first;
    r.second += lib != oracle;
  }
  void add_eq(const std::string& what, std::int64_t lib, std::int64_t oracle) {
    add(what, true, lib == oracle);
  }
};

std::vector<std::int64_t> residues(const tms::CommitmentVector<ToyGroup>& c) {
  std::vector<std::int64_t> out;
  for (const auto& e : c.entries) out.push_back(e.residue());
  return out;
}

std::int64_t oracle_matrix_eval(const tms::CommitmentMatrix<ToyGroup>& c, std::int64_t x,
                                std::int64_t y) {
  std::int64_t acc = 1;
  for (std::size_t j = 0; j < c.side(); ++j) {
    for (std::size_t l = 0; l < c.side(); ++l) {
      const auto e = to::smul(to::modpow(x, static_cast<std::int64_t>(l), to::Q),
                              to::modpow(y, static_cast<std::int64_t>(j), to::Q));
      acc = to::emul(acc, to::epow(c.entries[j][l].residue(), e));
    }
  }
  return acc;
}

Verdict toy_oracle_equivalence() {
  Tally t;
  // Group and field operations, exhaustive.
  for (std::int64_t a = 0; a < to::Q; ++a) {
    const auto sa = TS::from_u64(a);
    t.add_eq("mul_generator", ToyGroup::mul_generator(sa).residue(), to::gpow(a));
    t.add_eq("blinding_mul", (sa * ToyGroup::blinding_generator()).residue(), to::hpow(a));
    t.add_eq("scalar_neg", (-sa).value(), to::ssub(0, a));
    if (a != 0) t.add_eq("scalar_inverse", sa.inverse().value(), to::sinv(a));
    for (std::int64_t b = 0; b < to::Q; ++b) {
      const auto sb = TS::from_u64(b);
      t.add_eq("scalar_add", (sa + sb).value(), to::sadd(a, b));
      t.add_eq("scalar_sub", (sa - sb).value(), to::ssub(a, b));
      t.add_eq("scalar_mul", (sa * sb).value(), to::smul(a, b));
    }
  }
  const auto sub = to::subgroup();
  for (auto x : sub) {
    const auto ex = *ToyGroup::Element::from_residue(static_cast<std::uint32_t>(x));
    for (auto y : sub) {
      const auto ey = *ToyGroup::Element::from_residue(static_cast<std::uint32_t>(y));
      t.add_eq("element_add", (ex + ey).residue(), to::emul(x, y));
    }
    for (std::int64_t s = 0; s < to::Q; ++s) {
      t.add_eq("element_scalar_mul", (TS::from_u64(s) * ex).residue(), to::epow(x, s));
    }
  }
  for (int b = 0; b < 256; ++b) {
    const std::uint8_t byte = static_cast<std::uint8_t>(b);
    const bool in_subgroup = std::find(sub.begin(), sub.end(), b) != sub.end();
    t.add("element_decode", ToyGroup::Element::decode(tms::ByteView(&byte, 1)).has_value(),
          in_subgroup);
  }

  tms::SeededRng rng(2026);
  // Feldman and Pedersen share checks, randomized.
  for (int i = 0; i < 2000; ++i) {
    const auto degree = 1 + rng.uniform(4);
    const auto f = tms::Polynomial<ToyGroup>::random(TS::random(rng), degree, rng);
    const auto g = tms::Polynomial<ToyGroup>::random(TS::random(rng), degree, rng);
    const auto id = static_cast<ParticipantId>(1 + rng.uniform(10));
    const bool honest = rng.bernoulli(1, 2);
    const auto v = honest ? f.at(id) : TS::random(rng);
    const auto b = honest ? g.at(id) : TS::random(rng);
    const auto fc = tms::feldman_commit(f);
    t.add("feldman_verify", tms::feldman_verify(tms::SharePacket<ToyGroup>{id, v, std::nullopt}, fc),
          to::gpow(v.value()) == to::commit_eval(residues(fc), id));
    const auto pc = tms::pedersen_commit(f, g);
    t.add("pedersen_verify", tms::pedersen_verify(tms::SharePacket<ToyGroup>{id, v, b}, pc),
          to::emul(to::gpow(v.value()), to::hpow(b.value())) ==
              to::commit_eval(residues(pc), id));
  }

  // Feldman over every share value, Pedersen over every (value, blinding) pair.
  for (int i = 0; i < 30; ++i) {
    const auto degree = 1 + rng.uniform(4);
    const auto f = tms::Polynomial<ToyGroup>::random(TS::random(rng), degree, rng);
    const auto g = tms::Polynomial<ToyGroup>::random(TS::random(rng), degree, rng);
    const auto fc = tms::feldman_commit(f);
    const auto pc = tms::pedersen_commit(f, g);
    const auto id = static_cast<ParticipantId>(1 + rng.uniform(10));
    for (std::int64_t v = 0; v < to::Q; ++v) {
      const auto sv = TS::from_u64(static_cast<std::uint64_t>(v));
      t.add("feldman_verify",
            tms::feldman_verify(tms::SharePacket<ToyGroup>{id, sv, std::nullopt}, fc),
            to::gpow(v) == to::commit_eval(residues(fc), id));
      for (std::int64_t b = 0; b < to::Q; ++b) {
        const auto sb = TS::from_u64(static_cast<std::uint64_t>(b));
        t.add("pedersen_verify", tms::pedersen_verify(tms::SharePacket<ToyGroup>{id, sv, sb}, pc),
              to::emul(to::gpow(v), to::hpow(b)) == to::commit_eval(residues(pc), id));
      }
    }
  }

  // AVSS share check exhaustive per commitment, point check randomized.
  for (std::size_t side = 1; side <= 3; ++side) {
    const auto f = tms::BivariatePolynomial<ToyGroup>::random(TS::random(rng), side, rng);
    const auto fp = tms::BivariatePolynomial<ToyGroup>::random(TS::random(rng), side, rng);
    const auto c = tms::avss_commit(f, fp);
    for (ParticipantId m = 1; m <= 10; ++m) {
      for (std::int64_t s = 0; s < to::Q; ++s) {
        for (std::int64_t sp = 0; sp < to::Q; ++sp) {
          t.add("avss_verify_share",
                tms::avss_verify_share(c, m, TS::from_u64(s), TS::from_u64(sp)),
                to::emul(to::gpow(s), to::hpow(sp)) == oracle_matrix_eval(c, m, 0));
        }
      }
    }
    for (int i = 0; i < 1000; ++i) {
      const auto x = static_cast<std::int64_t>(rng.uniform(11));
      const auto y = static_cast<std::int64_t>(rng.uniform(11));
      const auto p = static_cast<std::int64_t>(rng.uniform(11));
      const auto pp = static_cast<std::int64_t>(rng.uniform(11));
      t.add("avss_verify_point",
            tms::avss_verify_point<ToyGroup>(c, TS::from_u64(x), TS::from_u64(y), TS::from_u64(p),
                                             TS::from_u64(pp)),
            to::emul(to::gpow(p), to::hpow(pp)) == oracle_matrix_eval(c, x, y));
    }
  }

  // DKG share check inside round2_finalize.
  for (int run = 0; run < 100; ++run) {
    const std::size_t n = 2 + rng.uniform(9);
    const std::size_t th = 1 + rng.uniform(n);
    const auto members = tms::id_range(n);
    std::vector<tms::DkgParticipant<ToyGroup>> nodes;
    std::map<ParticipantId, tms::DkgRound1Broadcast<ToyGroup>> bc;
    for (auto id : members) {
      nodes.emplace_back(id, members, th, crs());
      bc.emplace(id, nodes.back().round1(rng));
    }
    std::map<ParticipantId, std::map<ParticipantId, TS>> inbox;
    for (auto& node : nodes) {
      if (node.verify_round1(bc)) throw std::logic_error("honest toy dkg aborted");
      for (auto& [to_id, mu] : node.round2_send()) inbox[to_id][node.id()] = mu;
    }
    for (int k = 0; k < 10; ++k) {
      auto& node = nodes[rng.uniform(n)];
      if (n < 2) break;
      ParticipantId sender;
      do {
        sender = static_cast<ParticipantId>(1 + rng.uniform(n));
      } while (sender == node.id());
      for (std::uint64_t raw = 0; raw < to::Q; ++raw) {
        const auto v = TS::from_u64(raw);
        auto copy = node;
        auto in = inbox[node.id()];
        in[sender] = v;
        t.add("dkg_share_check", copy.round2_finalize(in).ok(),
              to::gpow(v.value()) ==
                  to::commit_eval(residues(bc.at(sender).commitment), node.id()));
      }
    }
  }

  // Protocol 2 partial check, exhaustive over z per signer.
  for (int run = 0; run < 40; ++run) {
    const std::size_t n = 3 + rng.uniform(8);
    const std::size_t th = 2 + rng.uniform(n - 1);
    const auto keys = tms::run_dkg<ToyGroup>(tms::id_range(n), th, crs(), rng.fork("k")).value();
    auto coalition = rng.sample(tms::id_range(n), th);
    std::sort(coalition.begin(), coalition.end());
    std::map<ParticipantId, tms::NonceCommitment<ToyGroup>> commitments;
    for (auto id : coalition) {
      commitments[id] = {ToyGroup::mul_generator(TS::random(rng)),
                         ToyGroup::mul_generator(TS::random(rng))};
    }
    tms::SigningPackage<ToyGroup> pkg(tms::Bytes{static_cast<std::uint8_t>(run)}, commitments);
    const auto gc = tms::group_commitment(pkg, keys[0].group_pk);
    std::vector<std::int64_t> oc(coalition.begin(), coalition.end());
    for (auto id : coalition) {
      const auto pk = keys[0].peer_pk_shares.at(id);
      const auto e = to::smul(gc.challenge.value(), to::lagrange(id, oc, 0));
      for (std::int64_t z = 0; z < to::Q; ++z) {
        t.add("partial_check", tms::verify_partial(pkg, gc, id, TS::from_u64(z), pk),
              to::gpow(z) == to::emul(gc.per_signer.at(id).residue(), to::epow(pk.residue(), e)));
      }
    }
  }

  std::size_t cases = 0, mismatches = 0;
  std::ostringstream detail;
  for (const auto& [what, r] : t.rows) {
    cases += r.first;
    mismatches += r.second;
    detail << what << " " << r.first << (r.second ? " (" + std::to_string(r.second) + " bad)" : "")
           << ", ";
  }
  const bool randomized_enough = t.rows["feldman_verify"].first >= 1000 &&
                                 t.rows["pedersen_verify"].first >= 1000 &&
                                 t.rows["avss_verify_point"].first >= 1000 &&
                                 t.rows["dkg_share_check"].first >= 1000 &&
                                 t.rows["partial_check"].first >= 1000;
  return {mismatches == 0 && randomized_enough,
          std::to_string(mismatches) + " mismatches in " + std::to_string(cases) + " cases [" +
              detail.str().substr(0, detail.str().size() - 2) + "]"};
}

// ----------------------------------------------------------------- [3]

const std::vector<std::pair<std::size_t, std::size_t>> kConfigs{{2, 4}, {3, 5}, {3, 8}};

template <class G>
bool dkg_correct(std::size_t t, std::size_t n, std::uint64_t seed, std::size_t& combos) {
  const auto keys = tms::run_dkg<G>(tms::id_range(n), t, crs(), tms::SeededRng(seed)).value();
  for (const auto& k : keys) {
    if (!(k.group_pk == keys[0].group_pk)) return false;
  }
  for (const auto& ids : subsets(tms::id_range(n), t)) {
    std::vector<std::pair<ParticipantId, typename G::Scalar>> pts;
    for (auto id : ids) pts.emplace_back(id, keys[id - 1].sk_share);
    ++combos;
    if (!(G::mul_generator(tms::interpolate_at<G>(pts, G::Scalar::zero())) == keys[0].group_pk)) {
      return false;
    }
  }
  return true;
}

Verdict dkg_correctness() {
  bool ok = true;
  std::size_t combos = 0;
  for (auto [t, n] : kConfigs) {
    ok = ok && dkg_correct<ToyGroup>(t, n, 100 + n, combos);
    ok = ok && dkg_correct<Ristretto255>(t, n, 200 + n, combos);
  }
  return {ok, "6 key generations, identical group_pk everywhere; " + std::to_string(combos) +
                  " t-subsets all satisfy s*G = group_pk"};
}

// ----------------------------------------------------------------- [4]

template <class G>
struct SignSession {
  std::optional<tms::SigningPackage<G>> package;
  std::map<ParticipantId, typename G::Scalar> partials;
};

template <class G>
SignSession<G> sign_session(const std::vector<tms::DkgKeys<G>>& keys,
                            const std::vector<ParticipantId>& coalition, const tms::Bytes& msg,
                            tms::SeededRng& rng) {
  std::map<ParticipantId, tms::Signer<G>> signers;
  std::map<ParticipantId, tms::NonceCommitment<G>> commitments;
  for (auto id : coalition) {
    auto& s = signers.emplace(id, tms::Signer<G>(keys[id - 1])).first->second;
    commitments[id] = s.sign_round1(1, rng).pairs.front();
  }
  SignSession<G> out;
  out.package.emplace(msg, commitments);
  for (auto& [id, s] : signers) out.partials[id] = s.sign_round2_partial(*out.package);
  return out;
}

template <class G>
bool every_coalition_signs(std::size_t t, std::size_t n, std::uint64_t seed, std::size_t& count) {
  const auto keys = tms::run_dkg<G>(tms::id_range(n), t, crs(), tms::SeededRng(seed)).value();
  for (auto size : {t, t + 1}) {
    if (size > n) continue;
    for (const auto& coalition : subsets(tms::id_range(n), size)) {
      const tms::Bytes msg{'c', static_cast<std::uint8_t>(count)};
      auto sig = tms::run_signing<G>(keys, coalition, msg, tms::SeededRng(seed + count));
      ++count;
      if (!sig || !tms::verify<G>(keys[0].group_pk, msg, sig.value())) return false;
    }
  }
  return true;
}

/// Signs with a random coalition, then flips one random bit of one partial.
template <class G>
bool corrupted_partial_trial(const std::vector<tms::DkgKeys<G>>& keys, std::size_t t,
                             tms::SeededRng& rng) {
  const auto n = keys.size();
  const auto size = std::min(n, t + rng.uniform(2));
  auto coalition = rng.sample(tms::id_range(n), size);
  std::sort(coalition.begin(), coalition.end());
  const tms::Bytes msg{'t', static_cast<std::uint8_t>(rng.uniform(256))};
  auto s = sign_session<G>(keys, coalition, msg, rng);
  auto good = tms::aggregate(*s.package, s.partials, keys[0].peer_pk_shares, keys[0].group_pk);
  if (!good || !tms::verify<G>(keys[0].group_pk, msg, good.value())) return false;

  const auto corrupter = coalition[rng.uniform(coalition.size())];
  auto bytes = s.partials[corrupter].to_bytes();
  const auto bit = rng.uniform(bytes.size() * 8);
  bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
  auto decoded = G::Scalar::decode(bytes);
  // An undecodable partial is rejected on receipt, attributed to its sender.
  if (!decoded) return true;
  s.partials[corrupter] = *decoded;
  auto bad = tms::aggregate(*s.package, s.partials, keys[0].peer_pk_shares, keys[0].group_pk);
  return !bad.ok() && bad.abort().kind == tms::AbortKind::InvalidPartial &&
         bad.abort().culprits == std::vector<ParticipantId>{corrupter};
}

Verdict signature_validity() {
  bool ok = true;
  std::size_t coalitions = 0;
  for (auto [t, n] : kConfigs) {
    ok = ok && every_coalition_signs<ToyGroup>(t, n, 300 + n, coalitions);
    ok = ok && every_coalition_signs<Ristretto255>(t, n, 400 + n, coalitions);
  }
  std::vector<std::vector<tms::DkgKeys<ToyGroup>>> toy;
  std::vector<std::vector<tms::DkgKeys<Ristretto255>>> curve;
  for (auto [t, n] : kConfigs) {
    toy.push_back(tms::run_dkg<ToyGroup>(tms::id_range(n), t, crs(), tms::SeededRng(500 + n)).value());
    curve.push_back(
        tms::run_dkg<Ristretto255>(tms::id_range(n), t, crs(), tms::SeededRng(600 + n)).value());
  }
  tms::SeededRng rng(4444);
  int trials_ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto which = rng.uniform(kConfigs.size());
    const auto t = kConfigs[which].first;
    const bool pass = rng.bernoulli(1, 2) ? corrupted_partial_trial(toy[which], t, rng)
                                          : corrupted_partial_trial(curve[which], t, rng);
    trials_ok += pass;
  }
  ok = ok && trials_ok == 50;
  return {ok, std::to_string(coalitions) + " coalitions of size t and t+1 verified; " +
                  std::to_string(trials_ok) + "/50 bit-flip trials aborted naming the corrupter"};
}

// ----------------------------------------------------------------- [5]

Verdict binding_property() {
  const auto keys =
      tms::run_dkg<Ristretto255>(tms::id_range(5), 3, crs(), tms::SeededRng(55)).value();
  const auto& pk = keys[0].group_pk;
  const auto& shares = keys[0].peer_pk_shares;
  tms::SeededRng rng(5555);
  int rejected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto coalition = rng.sample(tms::id_range(5), 3 + rng.uniform(2));
    std::sort(coalition.begin(), coalition.end());
    const tms::Bytes ma{'a', static_cast<std::uint8_t>(trial)};
    // Even trials: different messages. Odd trials: same message, fresh commitments.
    const tms::Bytes mb = trial % 2 == 0 ? tms::Bytes{'b', static_cast<std::uint8_t>(trial)} : ma;
    auto a = sign_session<Ristretto255>(keys, coalition, ma, rng);
    auto b = sign_session<Ristretto255>(keys, coalition, mb, rng);

    // A random nonempty proper subset of signers contributes from session B.
    std::vector<ParticipantId> from_b;
    do {
      from_b.clear();
      for (auto id : coalition) {
        if (rng.bernoulli(1, 2)) from_b.push_back(id);
      }
    } while (from_b.empty() || from_b.size() == coalition.size());
    auto mixed = a.partials;
    auto mixed_commitments = a.package->commitments();
    for (auto id : from_b) {
      mixed[id] = b.partials[id];
      mixed_commitments[id] = b.package->commitments().at(id);
    }
    const tms::SigningPackage<Ristretto255> wired(ma, mixed_commitments);
    const bool under_a = tms::aggregate(*a.package, mixed, shares, pk).ok();
    const bool under_b = tms::aggregate(*b.package, mixed, shares, pk).ok();
    const bool under_wired = tms::aggregate(wired, mixed, shares, pk).ok();
    // Even a forced sum of the mixed partials does not verify.
    auto z = RS::zero();
    for (const auto& [id, zi] : mixed) z += zi;
    const auto gc = tms::group_commitment(*a.package, pk);
    const bool forced = tms::verify<Ristretto255>(pk, ma, {gc.R, z});
    rejected += !under_a && !under_b && !under_wired && !forced;
  }
  return {rejected == 100,
          std::to_string(rejected) + "/100 cross-wired sessions failed aggregation"};
}

// ----------------------------------------------------------------- [6]

template <class G>
bool avss_in_memory(std::size_t t, std::size_t n, std::size_t deliver, std::uint64_t secret,
                    std::uint64_t seed, std::string& note) {
  tms::SeededRng rng(seed);
  const auto s = G::Scalar::from_u64(secret);
  const auto dealing = tms::avss_deal<G>(s, t, n, rng);
  const auto members = tms::id_range(n);
  std::vector<tms::AvssNode<G>> nodes;
  for (auto id : members) nodes.emplace_back(id, t, members);
  std::deque<tms::AvssPoint<G>> queue;
  for (std::size_t i = 0; i < deliver; ++i) {
    for (auto& p : nodes[i].on_deal(dealing.deals[i])) queue.push_back(std::move(p));
  }
  while (!queue.empty()) {
    auto p = std::move(queue.front());
    queue.pop_front();
    for (auto& q : nodes[p.recipient - 1].on_point(p)) queue.push_back(std::move(q));
  }
  std::vector<std::pair<ParticipantId, typename G::Scalar>> shares;
  std::size_t via_exchange = 0;
  for (const auto& node : nodes) {
    if (!node.complete()) return false;
    if (!tms::avss_verify_share(dealing.commitment, node.id(), node.share(), node.share_blinding())) {
      return false;
    }
    via_exchange += !node.completed_from_deal();
    shares.emplace_back(node.id(), node.share());
  }
  shares.resize(t);
  note = std::to_string(via_exchange);
  return tms::avss_recover_secret<G>(shares) == s;
}

Verdict avss_criterion() {
  // Honest shares accepted, every tampered value rejected, exhaustively on the toy group.
  std::size_t accepted = 0, tampered = 0, tampered_accepted = 0;
  tms::SeededRng rng(66);
  for (std::size_t t = 1; t <= 4; ++t) {
    const auto dealing = tms::avss_deal<ToyGroup>(TS::random(rng), t, 10, rng);
    for (const auto& deal : dealing.deals) {
      const auto m = deal.recipient;
      const auto sigma = deal.a(TS::zero());
      const auto sigma_p = deal.a_prime(TS::zero());
      accepted += tms::avss_verify_deal(deal) &&
                  tms::avss_verify_share(dealing.commitment, m, sigma, sigma_p);
      for (std::uint64_t v = 0; v < to::Q; ++v) {
        const auto x = TS::from_u64(v);
        if (!(x == sigma)) {
          ++tampered;
          tampered_accepted += tms::avss_verify_share(dealing.commitment, m, x, sigma_p);
        }
        if (!(x == sigma_p)) {
          ++tampered;
          tampered_accepted += tms::avss_verify_share(dealing.commitment, m, sigma, x);
        }
      }
    }
  }
  bool ok = accepted == 40 && tampered_accepted == 0;
  std::string detail = std::to_string(accepted) + "/40 honest shares accepted, " +
                       std::to_string(tampered - tampered_accepted) + "/" +
                       std::to_string(tampered) + " tampered values rejected";

  // Dealer crash after t deliveries, through the simulator on both backends.
  for (const char* backend : {"toy", "ed25519"}) {
    const auto doc = nlohmann::json::parse(std::string(R"({"seed": 9, "nodes": 7, "backend": ")") +
                                           backend + R"(", "delay": {"kind": "uniform", "lo": 1, "hi": 3},
      "domains": [{"id": "escrow", "members": [1, 2, 3, 4, 5, 6, 7], "threshold": 3, "sign": false,
                   "avss": {"dealer": 1, "secret": 5, "deliver_to": 3}}]})");
    const auto report = tms::sim::run_simulation(tms::sim::parse_config(doc));
    const auto& av = report.domains.at(0).avss;
    const bool crash_ok = av && av->dealt_to.size() == 3 &&
                          av->completed == std::vector<ParticipantId>{2, 3, 4, 5, 6, 7} &&
                          av->completed_via_exchange.size() == 3 && av->secret_recovered &&
                          av->faulty_senders.empty();
    ok = ok && crash_ok;
    detail += std::string("; ") + backend + " dealer crash after 3 deals: " +
              (av ? std::to_string(av->completed.size()) : "0") + "/6 surviving nodes complete";
  }

  std::string via;
  const bool toy_secret = avss_in_memory<ToyGroup>(2, 4, 4, 5, 67, via);
  const bool curve_secret = avss_in_memory<Ristretto255>(3, 7, 3, 5, 68, via);
  ok = ok && toy_secret && curve_secret;
  detail += std::string("; Secret=5 recovered: toy ") + (toy_secret ? "true" : "false") +
            ", ed25519 " + (curve_secret ? "true" : "false") + " (" + via + " via exchange)";
  return {ok, detail};
}

// ----------------------------------------------------------------- [7]

Verdict scaling_shape() {
  tms::cli::BenchOptions o;
  o.backend = "ed25519";
  o.t = 3;
  o.ns = {4, 8, 16, 32, 64};
  o.repetitions = 5;
  const auto rows = tms::cli::run_bench(o);
  bool increasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    increasing = increasing && rows[i].round2_ms > rows[i - 1].round2_ms;
  }
  const double ratio = rows.back().round2_ms / rows.front().round2_ms;
  double lo = rows[0].sign_ms, hi = rows[0].sign_ms;
  for (const auto& r : rows) {
    lo = std::min(lo, r.sign_ms);
    hi = std::max(hi, r.sign_ms);
  }
  std::ostringstream d;
  d << std::fixed << std::setprecision(1) << "round2 ms";
  for (const auto& r : rows) d << " n=" << r.n << ":" << r.round2_ms;
  d << "; strictly increasing " << (increasing ? "yes" : "no") << "; ratio 64/4 = " << ratio
    << std::setprecision(2) << "; sign ms " << lo << ".." << hi << " (spread " << hi / lo << "x)";
  return {increasing && ratio >= 20 && hi / lo < 3, d.str()};
}

// ----------------------------------------------------------------- [8]

Verdict gossip_liveness() {
  bool ok = true;
  std::ostringstream d;
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    const std::size_t t = n / 2 + 1;
    const auto keys =
        tms::run_dkg<Ristretto255>(tms::id_range(n), t, crs(), tms::SeededRng(800 + n)).value();
    const auto coalition = tms::id_range(t);
    const auto bound = static_cast<std::size_t>(std::ceil(4 * std::log2(static_cast<double>(n))));
    const tms::Bytes msg{'l', 'i', 'v', 'e'};
    int within = 0, agreed = 0;
    std::size_t worst = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto r = tms::run_gossip_session<Ristretto255>(keys, coalition, msg, {4, 2, 0},
                                                           tms::SeededRng(seed), 10 * bound);
      if (r.termination_round && *r.termination_round <= bound) ++within;
      worst = std::max(worst, r.termination_round.value_or(10 * bound + 1));
      std::optional<tms::Bytes> first;
      bool same = true;
      for (const auto& [id, sig] : r.signatures) {
        if (!sig) {
          same = false;
          break;
        }
        const auto enc = sig->encode();
        if (!first) first = enc;
        same = same && enc == *first;
      }
      if (same && first) {
        const auto sig = *tms::Signature<Ristretto255>::decode(*first);
        agreed += tms::verify<Ristretto255>(keys[0].group_pk, msg, sig);
      }
    }
    ok = ok && within >= 90 && agreed == 100;
    d << "n=" << n << ": " << within << "/100 within " << bound << " rounds (max " << worst
      << "), " << agreed << "/100 identical valid signatures; ";
  }
  auto s = d.str();
  return {ok, s.substr(0, s.size() - 2)};
}

// ----------------------------------------------------------------- [9]

Verdict determinism() {
  std::vector<std::pair<std::string, tms::sim::SimConfig>> scenarios;
  for (const auto& name : {"three-domains", "corrupt-dealer", "avss-dealer-crash"}) {
    scenarios.emplace_back(name, tms::sim::load_config(fs::path(TRUSTMESH_SCENARIO_DIR) /
                                                       (std::string(name) + ".json")));
  }
  scenarios.emplace_back("mixed-faults", tms::sim::parse_config(nlohmann::json::parse(R"({
    "seed": 31337, "nodes": 8, "backend": "ed25519",
    "delay": {"kind": "uniform", "lo": 1, "hi": 5},
    "domains": [
      {"id": "a", "members": [1, 2, 3, 4, 5], "threshold": 3},
      {"id": "b", "members": [4, 5, 6, 7, 8], "threshold": 3, "pedersen_vss": {"dealer": 6}},
      {"id": "c", "members": [1, 3, 5, 7], "threshold": 2, "avss": {"dealer": 3, "deliver_to": 2}},
      {"id": "d", "members": [2, 6, 8], "threshold": 2}
    ],
    "adversary": [
      {"node": 2, "behavior": "equivocate"},
      {"node": 8, "behavior": "crash", "at_tick": 3},
      {"node": 6, "behavior": "forge_partial"}
    ]})")));
  scenarios.emplace_back("toy", tms::sim::parse_config(nlohmann::json::parse(R"({
    "seed": 5, "nodes": 10, "backend": "toy",
    "domains": [{"id": "t", "members": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10], "threshold": 4}]})")));

  const auto dir = fs::temp_directory_path() / "trustmesh_acceptance";
  fs::create_directories(dir);
  int identical = 0, replayed = 0;
  for (const auto& [name, config] : scenarios) {
    const tms::sim::RunOptions opts{false, true};
    const auto a = tms::sim::run_simulation(config, opts);
    const auto b = tms::sim::run_simulation(config, opts);
    identical += a.trace_hash == b.trace_hash && a.to_json() == b.to_json() &&
                 a.trace.size() == b.trace.size();

    // Archive a trace through the CLI, then replay it.
    const auto scenario_file = dir / (name + ".json");
    std::ofstream(scenario_file) << tms::sim::to_json(config).dump();
    std::ostringstream out, err;
    tms::cli::SimulateOptions archive;
    archive.scenario = scenario_file;
    archive.trace = dir / (name + ".trace");
    archive.out = dir / (name + ".report.json");
    const int code = tms::cli::cmd_simulate(archive, out, err);
    tms::cli::SimulateOptions replay;
    replay.replay = archive.trace;
    replay.out = dir / (name + ".replay.json");
    const int replay_code = tms::cli::cmd_simulate(replay, out, err);
    replayed += code == replay_code && err.str().find("reproduced trace hash " + a.trace_hash) !=
                                           std::string::npos;
  }
  const int total = static_cast<int>(scenarios.size());
  return {identical == total && replayed == total,
          std::to_string(identical) + "/" + std::to_string(total) +
              " scenarios produced identical trace hashes and reports; " +
              std::to_string(replayed) + "/" + std::to_string(total) +
              " archived traces replayed to the same hash"};
}

}  // namespace

int main() {
  int failed = 0;
  failed += !run_criterion(1, "Feldman worked example", 1, feldman_worked_example);
  failed += !run_criterion(2, "Toy-group oracle equivalence", 30, toy_oracle_equivalence);
  failed += !run_criterion(3, "DKG correctness", 10, dkg_correctness);
  failed += !run_criterion(4, "Threshold-signature validity", 30, signature_validity);
  failed += !run_criterion(5, "Binding property", 10, binding_property);
  failed += !run_criterion(6, "AVSS", 30, avss_criterion);
  failed += !run_criterion(7, "Scaling shape", 600, scaling_shape);
  failed += !run_criterion(8, "Gossip liveness", 300, gossip_liveness);
  failed += !run_criterion(9, "Determinism", 60, determinism);
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
