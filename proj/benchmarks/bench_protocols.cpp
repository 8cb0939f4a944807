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

#include <benchmark/benchmark.h>

#include "trustmesh/dkg.hpp"
#include "trustmesh/gossip.hpp"
#include "trustmesh/ristretto255.hpp"
#include "trustmesh/signing.hpp"

namespace {

using trustmesh::Ristretto255;
using G = Ristretto255;

const trustmesh::Bytes& crs() {
  static const auto c = trustmesh::default_crs("bench", 0);
  return c;
}

void BM_ScalarMul(benchmark::State& state) {
  trustmesh::SeededRng rng(1);
  const auto s = G::Scalar::random(rng);
  const auto p = G::mul_generator(G::Scalar::random(rng));
  for (auto _ : state) benchmark::DoNotOptimize(s * p);
}
BENCHMARK(BM_ScalarMul);

void BM_BaseMul(benchmark::State& state) {
  trustmesh::SeededRng rng(2);
  const auto s = G::Scalar::random(rng);
  for (auto _ : state) benchmark::DoNotOptimize(G::mul_generator(s));
}
BENCHMARK(BM_BaseMul);

void BM_ElementAdd(benchmark::State& state) {
  trustmesh::SeededRng rng(3);
  const auto a = G::mul_generator(G::Scalar::random(rng));
  const auto b = G::mul_generator(G::Scalar::random(rng));
  for (auto _ : state) benchmark::DoNotOptimize(a + b);
}
BENCHMARK(BM_ElementAdd);

void BM_ScalarInverse(benchmark::State& state) {
  trustmesh::SeededRng rng(4);
  const auto s = G::Scalar::random(rng);
  for (auto _ : state) benchmark::DoNotOptimize(s.inverse());
}
BENCHMARK(BM_ScalarInverse);

void BM_HashToScalar(benchmark::State& state) {
  const trustmesh::Bytes msg(64, 0xab);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        trustmesh::hash_to_scalar<G>(trustmesh::kTagChallenge, {trustmesh::ByteView(msg)}));
  }
}
BENCHMARK(BM_HashToScalar);

// Per-node work for one participant of an n-node DKG with t = 3.
void BM_DkgRound1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto members = trustmesh::id_range(n);
  std::map<trustmesh::ParticipantId, trustmesh::DkgRound1Broadcast<G>> broadcasts;
  trustmesh::SeededRng rng(5);
  for (auto id : members) {
    trustmesh::DkgParticipant<G> p(id, members, 3, crs());
    broadcasts.emplace(id, p.round1(rng));
  }
  for (auto _ : state) {
    trustmesh::DkgParticipant<G> p(1, members, 3, crs());
    auto mine = broadcasts;
    mine.erase(1);
    mine.emplace(1, p.round1(rng));
    benchmark::DoNotOptimize(p.verify_round1(mine));
  }
}
BENCHMARK(BM_DkgRound1)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DkgRound2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto members = trustmesh::id_range(n);
  trustmesh::SeededRng rng(6);
  std::vector<trustmesh::DkgParticipant<G>> nodes;
  std::map<trustmesh::ParticipantId, trustmesh::DkgRound1Broadcast<G>> broadcasts;
  for (auto id : members) {
    nodes.emplace_back(id, members, 3, crs());
    broadcasts.emplace(id, nodes.back().round1(rng));
  }
  for (auto& node : nodes) (void)node.verify_round1(broadcasts);
  std::map<trustmesh::ParticipantId, G::Scalar> inbox;
  trustmesh::DkgParticipant<G> me = nodes.front();
  for (auto& node : nodes) {
    for (auto& [to, mu] : node.round2_send()) {
      if (to == 1) inbox[node.id()] = mu;
    }
  }
  for (auto _ : state) {
    auto copy = me;
    (void)copy.round2_send();
    benchmark::DoNotOptimize(copy.round2_finalize(inbox));
  }
}
BENCHMARK(BM_DkgRound2)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Sign3OfN(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto keys =
      trustmesh::run_dkg<G>(trustmesh::id_range(n), 3, crs(), trustmesh::SeededRng(7)).value();
  const trustmesh::Bytes msg{'m'};
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        trustmesh::run_signing<G>(keys, {1, 2, 3}, msg, trustmesh::SeededRng(++i)));
  }
}
BENCHMARK(BM_Sign3OfN)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& state) {
  trustmesh::SeededRng rng(8);
  const auto sk = G::Scalar::random(rng);
  const auto pk = G::mul_generator(sk);
  const trustmesh::Bytes msg{'v'};
  const auto sig = trustmesh::single_party_sign<G>(sk, msg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(trustmesh::verify<G>(pk, msg, sig));
}
BENCHMARK(BM_Verify);

void BM_GossipSession(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = n / 2 + 1;
  const auto keys =
      trustmesh::run_dkg<G>(trustmesh::id_range(n), t, crs(), trustmesh::SeededRng(9)).value();
  const auto coalition = trustmesh::id_range(t);
  const trustmesh::Bytes msg{'g'};
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto r = trustmesh::run_gossip_session<G>(keys, coalition, msg, {}, trustmesh::SeededRng(++i),
                                              200);
    state.counters["rounds"] = static_cast<double>(r.termination_round.value_or(0));
  }
}
BENCHMARK(BM_GossipSession)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
