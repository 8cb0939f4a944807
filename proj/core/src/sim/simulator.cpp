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

#include "trustmesh/sim/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <variant>

#include "trustmesh/avss.hpp"
#include "trustmesh/dkg.hpp"
#include "trustmesh/gossip.hpp"
#include "trustmesh/hash.hpp"
#include "trustmesh/ristretto255.hpp"
#include "trustmesh/secret_sharing.hpp"
#include "trustmesh/signing.hpp"
#include "trustmesh/toy_group.hpp"

namespace trustmesh::sim {

using nlohmann::json;

namespace {

std::string short_hash(ByteView data) {
  const auto d = sha512(data);
  return to_hex(ByteView(d.data(), 16));
}

template <class T>
std::vector<T> sorted(const std::set<T>& s) {
  return {s.begin(), s.end()};
}

template <PrimeOrderGroup G>
class Engine {
 public:
  using Scalar = typename G::Scalar;
  using Element = typename G::Element;
  using Broadcast = DkgRound1Broadcast<G>;

  struct R1Msg { Broadcast b; };
  struct R2Msg {
    Scalar mu;
    std::map<ParticipantId, std::string> view;  // sender -> round-1 digest
  };
  struct VssShareMsg { SharePacket<G> share; CommitmentVector<G> commitments; };
  struct VssComplaintMsg { Complaint<G> complaint; };
  struct AvssDealMsg { AvssDeal<G> deal; };
  struct AvssPointMsg { AvssPoint<G> point; };
  struct NonceMsg { NonceCommitment<G> pair; };
  struct GossipMsg { Transcript<G> t; };
  struct BroadcastMsg { Transcript<G> t; };
  struct TimerMsg {};

  using Payload = std::variant<R1Msg, R2Msg, VssShareMsg, VssComplaintMsg, AvssDealMsg,
                               AvssPointMsg, NonceMsg, GossipMsg, BroadcastMsg, TimerMsg>;

  struct Message {
    ParticipantId from = 0;
    ParticipantId to = 0;
    std::size_t domain = 0;
    Payload payload;
  };

  struct Event {
    std::uint64_t tick;
    std::uint64_t seq;
    Message msg;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return std::tie(a.tick, a.seq) > std::tie(b.tick, b.seq);
    }
  };

  struct Member {
    Member(ParticipantId id_, std::size_t d_, const DomainSpec& spec, const Bytes& crs,
           const SeededRng& base)
        : id(id_),
          d(d_),
          rng(base.fork("node/" + spec.id + "/" + std::to_string(id_))),
          gossip_rng(base.fork("gossip/" + spec.id + "/" + std::to_string(id_))),
          dkg(id_, spec.members, spec.threshold, crs) {}

    ParticipantId id;
    std::size_t d;
    SeededRng rng;
    SeededRng gossip_rng;
    DkgParticipant<G> dkg;
    std::optional<DkgParticipant<G>> shadow;
    std::optional<Broadcast> shadow_broadcast;
    std::set<ParticipantId> shadow_view;
    std::map<ParticipantId, Broadcast> r1_inbox;
    std::map<ParticipantId, R2Msg> r2_inbox;
    std::map<ParticipantId, std::string> r1_view;
    bool dkg_done = false;
    std::optional<Abort> abort;
    std::optional<DkgKeys<G>> keys;
    std::optional<Signer<G>> signer;
    std::map<ParticipantId, NonceCommitment<G>> nonces;
    std::optional<GossipNode<G>> gossip;
    std::vector<Message> pending_gossip;
    std::optional<Scalar> forged;
    std::optional<std::uint64_t> adopted_tick;
    std::optional<AvssNode<G>> avss;
    bool avss_gone = false;
    std::optional<SharePacket<G>> vss_share;
    bool vss_accepted = false;
    std::map<ParticipantId, Verdict> verdicts;
  };

  struct DomainState {
    const DomainSpec* spec = nullptr;
    Bytes crs;
    std::vector<ParticipantId> coalition;
    std::optional<ParticipantId> vss_dealer;
    std::optional<ParticipantId> avss_dealer;
    std::optional<Scalar> avss_secret;
    std::vector<ParticipantId> avss_dealt_to;
    std::optional<std::uint64_t> gossip_start;
    std::optional<std::uint64_t> first_broadcast;
    std::optional<std::uint64_t> dkg_complete;
  };

  Engine(const SimConfig& config, const RunOptions& options)
      : config_(config), options_(options), base_(config.seed), net_rng_(base_.fork("net")) {
    for (const auto& a : config_.adversary) {
      behaviors_[a.node].insert(a.behavior);
      if (a.behavior == Behavior::Crash) {
        auto& at = crash_at_[a.node];
        at = at ? std::min(*at, a.at_tick) : a.at_tick;
      }
    }
    for (std::size_t d = 0; d < config_.domains.size(); ++d) {
      const auto& spec = config_.domains[d];
      DomainState ds;
      ds.spec = &spec;
      ds.crs = default_crs(spec.id, config_.epoch);
      auto members = spec.members;
      std::sort(members.begin(), members.end());
      const auto k = config_.gossip.contributions_required.value_or(spec.threshold);
      if (spec.sign && (k < spec.threshold || k > members.size())) {
        throw ConfigError("/gossip/contributions_required",
                          "must lie between the threshold and the member count of domain " +
                              spec.id);
      }
      ds.coalition.assign(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
      if (spec.pedersen.enabled) {
        if (spec.threshold < 2) {
          throw ConfigError("/domains/" + std::to_string(d) + "/pedersen_vss",
                            "requires threshold >= 2");
        }
        ds.vss_dealer = spec.pedersen.dealer ? spec.pedersen.dealer : members.front();
      }
      if (spec.avss.enabled) ds.avss_dealer = spec.avss.dealer ? spec.avss.dealer : members.front();
      domains_.push_back(std::move(ds));
      for (auto id : members) {
        members_.emplace(std::make_pair(d, id), Member(id, d, spec, domains_.back().crs, base_));
      }
    }
  }

  SimReport run() {
    now_ = 0;
    start();
    while (now_ <= config_.max_ticks) {
      while (!queue_.empty() && queue_.top().tick == now_) {
        Event e = queue_.top();
        queue_.pop();
        deliver(e);
      }
      tick_hooks();
      const bool gossiping = any_gossip_active();
      if (queue_.empty() && !gossiping) break;
      now_ = gossiping || queue_.empty() ? now_ + 1 : queue_.top().tick;
    }
    return report();
  }

 private:
  // ------------------------------------------------------------- helpers

  [[nodiscard]] bool has(ParticipantId n, Behavior b) const {
    auto it = behaviors_.find(n);
    return it != behaviors_.end() && it->second.count(b) != 0;
  }
  [[nodiscard]] bool adversarial(ParticipantId n) const { return behaviors_.count(n) != 0; }
  [[nodiscard]] bool down(ParticipantId n) const {
    auto it = crash_at_.find(n);
    return it != crash_at_.end() && it->second && now_ >= *it->second;
  }

  Member& member(std::size_t d, ParticipantId id) { return members_.at({d, id}); }
  const DomainSpec& spec(std::size_t d) const { return *domains_[d].spec; }

  static const char* kind_of(const Payload& p) {
    static constexpr const char* kNames[] = {
        "dkg_round1", "dkg_round2", "vss_share", "vss_complaint", "avss_deal",
        "avss_point", "nonce_commitment", "gossip", "broadcast", "timer"};
    return kNames[p.index()];
  }

  static const char* phase_of(const Payload& p) {
    static constexpr const char* kPhases[] = {"dkg_round1", "dkg_round2", "pedersen_vss",
                                              "pedersen_vss", "avss", "avss", "signing",
                                              "gossip", "gossip", "dkg_round2"};
    return kPhases[p.index()];
  }

  static void append_poly(Bytes& out, const Polynomial<G>& p) {
    append_u32_be(out, static_cast<std::uint32_t>(p.coefficients().size()));
    for (const auto& c : p.coefficients()) append(out, c.to_bytes());
  }

  static Bytes encode(const Payload& p) {
    Bytes out;
    if (auto m = std::get_if<R1Msg>(&p)) {
      out = m->b.encode();
    } else if (auto m = std::get_if<R2Msg>(&p)) {
      out = m->mu.to_bytes();
      for (const auto& [id, h] : m->view) {
        append_u32_be(out, id);
        append(out, as_bytes(h));
      }
    } else if (auto m = std::get_if<VssShareMsg>(&p)) {
      out = m->share.encode();
      append(out, m->commitments.encode());
    } else if (auto m = std::get_if<VssComplaintMsg>(&p)) {
      append_u32_be(out, m->complaint.accuser);
      append(out, m->complaint.share.encode());
      append(out, m->complaint.commitments.encode());
    } else if (auto m = std::get_if<AvssDealMsg>(&p)) {
      append_u32_be(out, m->deal.recipient);
      append(out, m->deal.commitment.encode());
      for (const auto* poly : {&m->deal.a, &m->deal.a_prime, &m->deal.b, &m->deal.b_prime}) {
        append_poly(out, *poly);
      }
    } else if (auto m = std::get_if<AvssPointMsg>(&p)) {
      out = m->point.encode();
    } else if (auto m = std::get_if<NonceMsg>(&p)) {
      out = m->pair.A.to_bytes();
      append(out, m->pair.B.to_bytes());
    } else if (auto m = std::get_if<GossipMsg>(&p)) {
      out = m->t.encode();
    } else if (auto m = std::get_if<BroadcastMsg>(&p)) {
      out = m->t.encode();
    }
    return out;
  }

  class PhaseTimer {
   public:
    PhaseTimer(Engine& e, const char* phase)
        : e_(e), phase_(phase), start_(std::chrono::steady_clock::now()) {}
    ~PhaseTimer() {
      if (!e_.options_.include_timings) return;
      const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start_;
      e_.timings_[phase_] += dt.count();
    }
    PhaseTimer(const PhaseTimer&) = delete;
    PhaseTimer& operator=(const PhaseTimer&) = delete;

   private:
    Engine& e_;
    const char* phase_;
    std::chrono::steady_clock::time_point start_;
  };

  std::uint64_t draw_delay() {
    const auto& dm = config_.delay;
    if (dm.kind == DelayModel::Kind::Fixed || dm.hi <= dm.lo) return dm.lo;
    return dm.lo + net_rng_.uniform(dm.hi - dm.lo + 1);
  }

  void send(ParticipantId from, ParticipantId to, std::size_t d, Payload payload) {
    if (down(from) || has(from, Behavior::Silent)) return;
    const std::string kind = kind_of(payload);
    ++messages_by_kind_[kind];
    ++messages_total_;
    queue_.push(Event{now_ + draw_delay(), seq_++, Message{from, to, d, std::move(payload)}});
  }

  void schedule_timer(ParticipantId node, std::size_t d, std::uint64_t at) {
    queue_.push(Event{at, seq_++, Message{node, node, d, TimerMsg{}}});
  }

  void trace(const Event& e, bool dropped) {
    const auto& m = e.msg;
    const Bytes payload = encode(m.payload);
    Bytes rec;
    rec.push_back(dropped ? 1 : 0);
    append_u64_be(rec, e.tick);
    append_u64_be(rec, e.seq);
    append_u32_be(rec, m.from);
    append_u32_be(rec, m.to);
    append_u32_be(rec, static_cast<std::uint32_t>(m.domain));
    const std::string kind = kind_of(m.payload);
    append_u64_be(rec, kind.size());
    append(rec, as_bytes(kind));
    append_u64_be(rec, payload.size());
    append(rec, payload);
    stream_.update(rec);
    if (options_.record_trace) {
      trace_.push_back({e.tick, e.seq, m.from, m.to, spec(m.domain).id,
                        dropped ? "dropped:" + kind : kind, short_hash(payload)});
    }
  }

  // --------------------------------------------------------------- start

  void start() {
    for (std::size_t d = 0; d < domains_.size(); ++d) {
      const auto& s = spec(d);
      for (auto id : s.members) start_dkg(member(d, id));
      if (domains_[d].vss_dealer) start_pedersen(d);
      if (domains_[d].avss_dealer) start_avss(d);
    }
  }

  void start_dkg(Member& m) {
    PhaseTimer timer(*this, "dkg_round1");
    const auto& s = spec(m.d);
    auto b = m.dkg.round1(m.rng);
    std::optional<Broadcast> alt;
    if (has(m.id, Behavior::Equivocate)) {
      m.shadow.emplace(m.id, s.members, s.threshold, domains_[m.d].crs);
      alt = m.shadow->round1(m.rng);
      m.shadow_broadcast = alt;
    }
    m.r1_inbox[m.id] = b;
    std::size_t index = 0;
    for (auto peer : m.dkg.members()) {
      if (peer == m.id) continue;
      if (alt && index++ % 2 == 1) {
        m.shadow_view.insert(peer);
        send(m.id, peer, m.d, R1Msg{*alt});
      } else {
        send(m.id, peer, m.d, R1Msg{b});
      }
    }
    schedule_timer(m.id, m.d, config_.round_timeout);
    schedule_timer(m.id, m.d, 2 * config_.round_timeout);
    maybe_verify_round1(m);
  }

  void start_pedersen(std::size_t d) {
    PhaseTimer timer(*this, "pedersen_vss");
    const auto& s = spec(d);
    const auto dealer = *domains_[d].vss_dealer;
    auto& m = member(d, dealer);
    auto rng = m.rng.fork("pedersen");
    const auto f = Polynomial<G>::random(Scalar::random(rng), s.threshold - 1, rng);
    const auto g = Polynomial<G>::random(Scalar::random(rng), s.threshold - 1, rng);
    auto members = s.members;
    std::sort(members.begin(), members.end());
    const auto deal = pedersen_deal(f, g, std::span<const ParticipantId>(members));
    for (auto share : deal.shares) {
      if (share.id == dealer) {
        m.vss_share = share;
        m.vss_accepted = true;
        continue;
      }
      if (has(dealer, Behavior::CorruptShares)) share.value += Scalar::one();
      send(dealer, share.id, d, VssShareMsg{share, deal.commitments});
    }
  }

  void start_avss(std::size_t d) {
    PhaseTimer timer(*this, "avss");
    auto& ds = domains_[d];
    const auto& s = spec(d);
    const auto dealer = *ds.avss_dealer;
    auto members = s.members;
    std::sort(members.begin(), members.end());
    for (auto id : members) member(d, id).avss.emplace(id, s.threshold, members);

    auto& m = member(d, dealer);
    auto rng = m.rng.fork("avss");
    ds.avss_secret = s.avss.secret ? Scalar::from_u64(*s.avss.secret) : Scalar::random(rng);
    const auto f = BivariatePolynomial<G>::random(*ds.avss_secret, s.threshold, rng);
    const auto f_prime = BivariatePolynomial<G>::random(Scalar::random(rng), s.threshold, rng);
    auto dealing = avss_deal_from(f, f_prime, std::span<const ParticipantId>(members));

    std::size_t budget = s.avss.deliver_to.value_or(members.size());
    for (auto& deal : dealing.deals) {
      if (deal.recipient == dealer) continue;
      if (budget == 0) break;
      --budget;
      if (has(dealer, Behavior::CorruptShares)) {
        auto coeffs = deal.a.coefficients();
        coeffs[0] += Scalar::one();
        deal.a = Polynomial<G>(std::move(coeffs));
      }
      ds.avss_dealt_to.push_back(deal.recipient);
      send(dealer, deal.recipient, d, AvssDealMsg{deal});
    }
    if (s.avss.deliver_to) {
      m.avss_gone = true;
      return;
    }
    for (const auto& deal : dealing.deals) {
      if (deal.recipient == dealer) send_points(m, m.avss->on_deal(deal));
    }
  }

  // ----------------------------------------------------------------- DKG

  void maybe_verify_round1(Member& m, bool timed_out = false) {
    if (m.dkg.phase() != DkgPhase::Round1Done) return;
    if (!timed_out && m.r1_inbox.size() < m.dkg.members().size()) return;
    PhaseTimer timer(*this, "dkg_round1");
    for (const auto& [sender, b] : m.r1_inbox) m.r1_view[sender] = short_hash(b.encode());
    json rec = {{"domain", spec(m.d).id}, {"node", m.id}, {"round", 1}, {"tick", now_}};
    rec["broadcasts"] = json::object();
    for (const auto& [sender, h] : m.r1_view) rec["broadcasts"][std::to_string(sender)] = h;

    if (auto abort = m.dkg.verify_round1(m.r1_inbox)) {
      rec["abort"] = abort->describe();
      dkg_records_.push_back(std::move(rec));
      fail(m, *abort);
      return;
    }
    dkg_records_.push_back(std::move(rec));
    if (m.shadow) m.shadow->verify_round1(shadow_inbox(m));

    for (auto [peer, mu] : m.dkg.round2_send()) {
      if (m.shadow_view.count(peer)) mu = m.shadow->own_polynomial().at(peer);
      if (has(m.id, Behavior::CorruptShares)) mu += Scalar::one();
      send(m.id, peer, m.d, R2Msg{mu, m.r1_view});
    }
    maybe_finalize(m);
  }

  static std::map<ParticipantId, Broadcast> shadow_inbox(const Member& m) {
    auto inbox = m.r1_inbox;
    inbox[m.id] = *m.shadow_broadcast;
    return inbox;
  }

  void maybe_finalize(Member& m, bool timed_out = false) {
    if (m.dkg_done || m.dkg.phase() != DkgPhase::Round1Verified) return;
    if (!timed_out && m.r2_inbox.size() + 1 < m.dkg.members().size()) return;
    PhaseTimer timer(*this, "dkg_round2");
    m.dkg_done = true;
    json rec = {{"domain", spec(m.d).id}, {"node", m.id}, {"round", 2}, {"tick", now_}};
    rec["shares"] = json::object();
    for (const auto& [sender, msg] : m.r2_inbox) {
      rec["shares"][std::to_string(sender)] = short_hash(encode(Payload{msg}));
    }

    std::set<ParticipantId> equivocators;
    for (const auto& [sender, msg] : m.r2_inbox) {
      for (const auto& [id, h] : msg.view) {
        auto mine = m.r1_view.find(id);
        if (mine != m.r1_view.end() && mine->second != h) equivocators.insert(id);
      }
    }
    if (!equivocators.empty()) {
      Abort abort{AbortKind::Equivocation, sorted(equivocators)};
      rec["abort"] = abort.describe();
      dkg_records_.push_back(std::move(rec));
      fail(m, abort);
      return;
    }

    std::map<ParticipantId, Scalar> shares;
    for (const auto& [sender, msg] : m.r2_inbox) shares.emplace(sender, msg.mu);
    auto result = m.dkg.round2_finalize(shares);
    if (!result) {
      rec["abort"] = result.abort().describe();
      dkg_records_.push_back(std::move(rec));
      fail(m, result.abort());
      return;
    }
    m.keys = std::move(result).value();
    rec["group_pk"] = to_hex(m.keys->group_pk.to_bytes());
    rec["pk_share"] = to_hex(m.keys->pk_share.to_bytes());
    dkg_records_.push_back(std::move(rec));
    if (!adversarial(m.id)) {
      auto& done = domains_[m.d].dkg_complete;
      done = done ? std::max(*done, now_) : now_;
    }
    start_signing(m);
  }

  void fail(Member& m, const Abort& abort) {
    m.dkg_done = true;
    if (!m.abort) m.abort = abort;
  }

  // ------------------------------------------------------------- signing

  void start_signing(Member& m) {
    const auto& ds = domains_[m.d];
    if (!ds.spec->sign) return;
    PhaseTimer timer(*this, "signing");
    if (std::find(ds.coalition.begin(), ds.coalition.end(), m.id) != ds.coalition.end()) {
      m.signer.emplace(*m.keys);
      auto sign_rng = m.rng.fork("nonce");
      const auto pair = m.signer->sign_round1(1, sign_rng).pairs.front();
      m.nonces[m.id] = pair;
      for (auto peer : ds.spec->members) {
        if (peer != m.id) send(m.id, peer, m.d, NonceMsg{pair});
      }
    }
    maybe_package(m);
  }

  void maybe_package(Member& m) {
    auto& ds = domains_[m.d];
    if (m.gossip || !m.keys || m.nonces.size() < ds.coalition.size()) return;
    PhaseTimer timer(*this, "signing");
    const auto& s = *ds.spec;
    SigningPackage<G> package(Bytes(s.message.begin(), s.message.end()), m.nonces);
    GossipParams params{config_.gossip.c, config_.gossip.broadcast_prob_num, ds.coalition.size()};
    m.gossip.emplace(m.id, m.dkg.members(), s.id, package, m.keys->group_pk,
                     m.keys->peer_pk_shares, params);
    ds.gossip_start = ds.gossip_start ? std::min(*ds.gossip_start, now_) : now_;
    if (m.signer) {
      const auto z = m.signer->sign_round2_partial(package);
      if (has(m.id, Behavior::ForgePartial)) {
        m.forged = z + Scalar::one();
      } else {
        m.gossip->add_own_partial(z);
      }
    }
    auto pending = std::move(m.pending_gossip);
    m.pending_gossip.clear();
    for (auto& msg : pending) handle(m, msg);
  }

  // -------------------------------------------------------------- gossip

  [[nodiscard]] bool any_gossip_active() const {
    for (const auto& [key, m] : members_) {
      if (m.gossip && !m.gossip->finished() && !down(m.id) && !has(m.id, Behavior::Silent)) {
        return true;
      }
    }
    return false;
  }

  void tick_hooks() {
    for (auto& [key, m] : members_) {
      if (!m.gossip || m.gossip->finished() || down(m.id) || has(m.id, Behavior::Silent)) continue;
      PhaseTimer timer(*this, "gossip");
      if (m.forged) {
        auto t = m.gossip->transcript();
        t.contributions[m.id] = *m.forged;
        std::vector<ParticipantId> peers;
        for (auto p : m.dkg.members()) {
          if (p != m.id) peers.push_back(p);
        }
        const auto fanout = gossip_fanout(m.dkg.members().size(), config_.gossip.c);
        for (auto peer : m.gossip_rng.sample(peers, fanout)) send(m.id, peer, m.d, GossipMsg{t});
        continue;
      }
      for (auto& [peer, t] : m.gossip->gossip_round(m.gossip_rng)) {
        send(m.id, peer, m.d, GossipMsg{std::move(t)});
      }
      if (auto b = m.gossip->maybe_terminate(m.gossip_rng)) {
        auto& ds = domains_[m.d];
        if (!ds.first_broadcast) ds.first_broadcast = now_;
        if (m.gossip->observe_broadcast(*b)) m.adopted_tick = now_;
        for (auto peer : m.dkg.members()) {
          if (peer != m.id) send(m.id, peer, m.d, BroadcastMsg{*b});
        }
      }
    }
  }

  // ------------------------------------------------------------ delivery

  void deliver(const Event& e) {
    const auto& msg = e.msg;
    const bool timer = std::holds_alternative<TimerMsg>(msg.payload);
    if (down(msg.to)) {
      if (!timer) {
        ++messages_dropped_;
        trace(e, true);
      }
      return;
    }
    if (!timer) trace(e, false);
    handle(member(msg.domain, msg.to), msg);
  }

  void handle(Member& m, const Message& msg) {
    PhaseTimer timer(*this, phase_of(msg.payload));
    const auto from = msg.from;
    if (auto p = std::get_if<R1Msg>(&msg.payload)) {
      if (m.dkg.phase() != DkgPhase::Round1Done || m.r1_inbox.count(from)) return;
      m.r1_inbox.emplace(from, p->b);
      maybe_verify_round1(m);
    } else if (auto p = std::get_if<R2Msg>(&msg.payload)) {
      if (m.dkg_done) return;
      m.r2_inbox.emplace(from, *p);
      maybe_finalize(m);
    } else if (std::holds_alternative<TimerMsg>(msg.payload)) {
      if (m.dkg.phase() == DkgPhase::Round1Done) {
        maybe_verify_round1(m, true);
      } else if (now_ >= 2 * config_.round_timeout) {
        maybe_finalize(m, true);
      }
    } else if (auto p = std::get_if<VssShareMsg>(&msg.payload)) {
      on_vss_share(m, *p);
    } else if (auto p = std::get_if<VssComplaintMsg>(&msg.payload)) {
      const auto& c = p->complaint;
      if (c.accuser != from || c.share.id != from) return;
      m.verdicts[c.accuser] = adjudicate_complaint(c);
    } else if (auto p = std::get_if<AvssDealMsg>(&msg.payload)) {
      if (m.avss && !m.avss_gone) send_points(m, m.avss->on_deal(p->deal));
    } else if (auto p = std::get_if<AvssPointMsg>(&msg.payload)) {
      if (m.avss && !m.avss_gone) send_points(m, m.avss->on_point(p->point));
    } else if (auto p = std::get_if<NonceMsg>(&msg.payload)) {
      const auto& co = domains_[m.d].coalition;
      if (std::find(co.begin(), co.end(), from) == co.end() || m.nonces.count(from)) return;
      m.nonces.emplace(from, p->pair);
      maybe_package(m);
    } else if (auto p = std::get_if<GossipMsg>(&msg.payload)) {
      if (!m.gossip) {
        m.pending_gossip.push_back(msg);
        return;
      }
      m.gossip->receive(from, p->t);
    } else if (auto p = std::get_if<BroadcastMsg>(&msg.payload)) {
      if (!m.gossip) {
        m.pending_gossip.push_back(msg);
        return;
      }
      if (m.gossip->observe_broadcast(p->t)) m.adopted_tick = now_;
    }
  }

  void on_vss_share(Member& m, const VssShareMsg& p) {
    const auto dealer = domains_[m.d].vss_dealer;
    if (!dealer || m.vss_share || p.share.id != m.id || !p.share.blinding) return;
    m.vss_share = p.share;
    if (pedersen_verify(p.share, p.commitments)) {
      m.vss_accepted = true;
      return;
    }
    Complaint<G> complaint{m.id, p.share, p.commitments};
    m.verdicts[m.id] = adjudicate_complaint(complaint);
    for (auto peer : spec(m.d).members) {
      if (peer != m.id) send(m.id, peer, m.d, VssComplaintMsg{complaint});
    }
  }

  void send_points(Member& m, std::vector<AvssPoint<G>> points) {
    for (auto& p : points) {
      if (has(m.id, Behavior::CorruptShares)) p.row_value += Scalar::one();
      send(m.id, p.recipient, m.d, AvssPointMsg{std::move(p)});
    }
  }

  // -------------------------------------------------------------- report

  DomainReport domain_report(std::size_t d) {
    const auto& ds = domains_[d];
    const auto& s = *ds.spec;
    DomainReport r;
    r.id = s.id;
    r.members = s.members;
    std::sort(r.members.begin(), r.members.end());
    r.threshold = s.threshold;
    r.coalition = ds.coalition;
    r.dkg_complete_tick = ds.dkg_complete;
    r.gossip_start_tick = ds.gossip_start;
    if (ds.first_broadcast && ds.gossip_start) {
      r.termination_round = *ds.first_broadcast - *ds.gossip_start + 1;
    }
    if (s.sign) r.message_hex = to_hex(as_bytes(s.message));

    std::vector<ParticipantId> honest;
    for (auto id : r.members) {
      if (!adversarial(id)) honest.push_back(id);
    }

    std::set<ParticipantId> equivocators, flagged;
    std::set<std::string> pks;
    bool all_keys = true;
    for (auto id : r.members) {
      const auto& m = members_.at({d, id});
      if (m.keys) {
        r.node_group_pks[id] = to_hex(m.keys->group_pk.to_bytes());
        if (s.exfiltrate) r.exfiltrated_sk_shares[id] = to_hex(m.keys->sk_share.to_bytes());
      }
      if (adversarial(id)) continue;
      if (m.abort) {
        r.aborts.push_back({id, to_string(m.abort->kind), m.abort->culprits});
        if (m.abort->kind == AbortKind::Equivocation) {
          equivocators.insert(m.abort->culprits.begin(), m.abort->culprits.end());
        }
      }
      if (m.keys) {
        pks.insert(r.node_group_pks[id]);
      } else {
        all_keys = false;
      }
      if (m.gossip) flagged.insert(m.gossip->flagged().begin(), m.gossip->flagged().end());
    }
    r.equivocators = sorted(equivocators);
    r.gossip_flagged = sorted(flagged);

    std::string status = "ok";
    auto demote = [&status](const std::string& s2) {
      static const std::map<std::string, int> rank = {
          {"ok", 0}, {"verification_failed", 1}, {"incomplete", 2}, {"aborted", 3}};
      if (rank.at(s2) > rank.at(status)) status = s2;
    };
    if (!r.aborts.empty()) demote("aborted");
    if (!all_keys) demote("incomplete");
    if (pks.size() > 1) demote("verification_failed");

    if (all_keys && pks.size() == 1 && !honest.empty()) {
      r.group_pk = *pks.begin();
      const auto& keys = *members_.at({d, honest.front()}).keys;
      for (const auto& [id, pk] : keys.peer_pk_shares) r.pk_shares[id] = to_hex(pk.to_bytes());
    }

    if (ds.vss_dealer) {
      PedersenReport pr;
      pr.dealer = *ds.vss_dealer;
      std::map<ParticipantId, std::vector<Verdict>> seen;
      for (auto id : r.members) {
        const auto& m = members_.at({d, id});
        if (m.vss_accepted && id != pr.dealer) pr.accepted_by.push_back(id);
        if (adversarial(id)) continue;
        for (const auto& [accuser, v] : m.verdicts) seen[accuser].push_back(v);
      }
      for (const auto& [accuser, verdicts] : seen) {
        ComplaintRecord c;
        c.accuser = accuser;
        c.verdict = to_string(verdicts.front());
        c.observers = verdicts.size();
        c.unanimous = std::all_of(verdicts.begin(), verdicts.end(),
                                  [&](Verdict v) { return v == verdicts.front(); });
        if (c.unanimous && verdicts.front() == Verdict::DealerFaulty) pr.dealer_disqualified = true;
        pr.complaints.push_back(c);
      }
      if (pr.dealer_disqualified) demote("aborted");
      r.pedersen = pr;
    }

    if (ds.avss_dealer) {
      AvssReport ar;
      ar.dealer = *ds.avss_dealer;
      ar.dealt_to = ds.avss_dealt_to;
      std::set<ParticipantId> faulty;
      std::vector<std::pair<ParticipantId, Scalar>> shares;
      bool all_complete = true;
      for (auto id : r.members) {
        const auto& m = members_.at({d, id});
        if (!m.avss || m.avss_gone) continue;
        if (m.avss->dealer_faulty()) ar.rejected_deal.push_back(id);
        if (adversarial(id)) continue;
        faulty.insert(m.avss->faulty_senders().begin(), m.avss->faulty_senders().end());
        if (m.avss->complete()) {
          ar.completed.push_back(id);
          if (!m.avss->completed_from_deal()) ar.completed_via_exchange.push_back(id);
          shares.emplace_back(id, m.avss->share());
        } else {
          all_complete = false;
        }
      }
      ar.faulty_senders = sorted(faulty);
      if (shares.size() >= s.threshold) {
        shares.resize(s.threshold);
        ar.secret_recovered = avss_recover_secret<G>(shares) == *ds.avss_secret;
      }
      if (!ar.rejected_deal.empty()) {
        demote("aborted");
      } else if (!all_complete) {
        demote("incomplete");
      }
      r.avss = ar;
    }

    if (s.sign) {
      std::set<std::string> sigs;
      bool all_final = true;
      std::optional<std::uint64_t> final_tick;
      for (auto id : r.members) {
        const auto& m = members_.at({d, id});
        if (m.gossip && m.gossip->signature()) {
          r.node_signatures[id] = to_hex(m.gossip->signature()->encode());
        }
        if (adversarial(id)) continue;
        if (m.gossip && m.gossip->signature()) {
          sigs.insert(r.node_signatures[id]);
          if (m.adopted_tick) final_tick = final_tick ? std::max(*final_tick, *m.adopted_tick)
                                                      : *m.adopted_tick;
        } else {
          all_final = false;
        }
      }
      r.finalize_tick = final_tick;
      if (sigs.size() > 1) {
        demote("verification_failed");
      } else if (sigs.size() == 1) {
        r.signature = *sigs.begin();
        if (r.group_pk) {
          auto pk = G::Element::decode(from_hex(*r.group_pk));
          auto sig = Signature<G>::decode(from_hex(*r.signature));
          r.signature_valid = pk && sig && verify<G>(*pk, as_bytes(s.message), *sig);
        }
        if (!r.signature_valid) demote("verification_failed");
      }
      if (!all_final) demote("incomplete");
    }
    r.status = status;
    return r;
  }

  SimReport report() {
    SimReport rep;
    rep.seed = config_.seed;
    rep.backend = config_.backend;
    rep.ticks = now_;
    rep.messages_total = messages_total_;
    rep.messages_dropped = messages_dropped_;
    rep.messages_by_kind = messages_by_kind_;
    const auto digest = stream_.finish();
    rep.trace_hash = to_hex(ByteView(digest.data(), 32));
    for (std::size_t d = 0; d < domains_.size(); ++d) {
      rep.domains.push_back(domain_report(d));
      for (const auto& [id, sk] : rep.domains.back().node_group_pks) {
        rep.node_domains[id].push_back(rep.domains.back().id);
      }
    }
    if (options_.include_timings) rep.timings_ms = timings_;
    rep.trace = std::move(trace_);
    rep.dkg_transcript = std::move(dkg_records_);
    return rep;
  }

  const SimConfig& config_;
  RunOptions options_;
  SeededRng base_;
  SeededRng net_rng_;
  std::map<ParticipantId, std::set<Behavior>> behaviors_;
  std::map<ParticipantId, std::optional<std::uint64_t>> crash_at_;
  std::vector<DomainState> domains_;
  std::map<std::pair<std::size_t, ParticipantId>, Member> members_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t messages_total_ = 0;
  std::uint64_t messages_dropped_ = 0;
  std::map<std::string, std::uint64_t> messages_by_kind_;
  std::map<std::string, double> timings_;
  Sha512Stream stream_;
  std::vector<TraceEvent> trace_;
  std::vector<json> dkg_records_;
};

json opt_json(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }
json opt_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

json id_map_json(const std::map<ParticipantId, std::string>& m) {
  json out = json::object();
  for (const auto& [id, v] : m) out[std::to_string(id)] = v;
  return out;
}

json domain_json(const DomainReport& r) {
  json j = {{"id", r.id},
            {"members", r.members},
            {"threshold", r.threshold},
            {"status", r.status},
            {"group_pk", opt_json(r.group_pk)},
            {"pk_shares", id_map_json(r.pk_shares)},
            {"node_group_pks", id_map_json(r.node_group_pks)},
            {"equivocators", r.equivocators},
            {"coalition", r.coalition},
            {"message", opt_json(r.message_hex)},
            {"signature", opt_json(r.signature)},
            {"signature_valid", r.signature_valid},
            {"node_signatures", id_map_json(r.node_signatures)},
            {"gossip_flagged", r.gossip_flagged},
            {"ticks",
             {{"dkg_complete", opt_json(r.dkg_complete_tick)},
              {"gossip_start", opt_json(r.gossip_start_tick)},
              {"termination_round", opt_json(r.termination_round)},
              {"finalize", opt_json(r.finalize_tick)}}}};
  j["aborts"] = json::array();
  for (const auto& a : r.aborts) {
    j["aborts"].push_back({{"node", a.node}, {"kind", a.kind}, {"culprits", a.culprits}});
  }
  if (!r.exfiltrated_sk_shares.empty()) j["sk_shares"] = id_map_json(r.exfiltrated_sk_shares);
  if (r.pedersen) {
    json p = {{"dealer", r.pedersen->dealer},
              {"accepted_by", r.pedersen->accepted_by},
              {"dealer_disqualified", r.pedersen->dealer_disqualified},
              {"complaints", json::array()}};
    for (const auto& c : r.pedersen->complaints) {
      p["complaints"].push_back({{"accuser", c.accuser},
                                 {"verdict", c.verdict},
                                 {"observers", c.observers},
                                 {"unanimous", c.unanimous}});
    }
    j["pedersen_vss"] = p;
  }
  if (r.avss) {
    j["avss"] = {{"dealer", r.avss->dealer},
                 {"dealt_to", r.avss->dealt_to},
                 {"completed", r.avss->completed},
                 {"completed_via_exchange", r.avss->completed_via_exchange},
                 {"faulty_senders", r.avss->faulty_senders},
                 {"rejected_deal", r.avss->rejected_deal},
                 {"secret_recovered", r.avss->secret_recovered}};
  }
  return j;
}

template <PrimeOrderGroup G>
SimReport run_with(const SimConfig& config, const RunOptions& options) {
  validate(config, G::kMaxParticipantId);
  Engine<G> engine(config, options);
  return engine.run();
}

}  // namespace

json SimReport::to_json() const {
  json j = {{"seed", seed},
            {"backend", backend},
            {"ticks", ticks},
            {"trace_hash", trace_hash},
            {"messages", {{"total", messages_total}, {"dropped", messages_dropped}}}};
  j["messages"]["by_kind"] = messages_by_kind;
  j["domains"] = json::array();
  for (const auto& d : domains) j["domains"].push_back(domain_json(d));
  json nd = json::object();
  for (const auto& [id, ds] : node_domains) nd[std::to_string(id)] = ds;
  j["node_domains"] = nd;
  if (!timings_ms.empty()) j["timings_ms"] = timings_ms;
  return j;
}

int SimReport::exit_code() const {
  bool failed = false, aborted = false;
  for (const auto& d : domains) {
    if (d.status == "verification_failed") failed = true;
    if (d.status == "aborted" || d.status == "incomplete") aborted = true;
  }
  if (failed) return 3;
  return aborted ? 2 : 0;
}

const DomainReport* SimReport::domain(const std::string& id) const {
  for (const auto& d : domains) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

json trace_event_json(const TraceEvent& e) {
  return {{"tick", e.tick}, {"seq", e.seq},   {"from", e.from},
          {"to", e.to},     {"domain", e.domain}, {"kind", e.kind},
          {"payload", e.payload_digest}};
}

SimReport run_simulation(const SimConfig& config, const RunOptions& options) {
  if (config.backend == "toy") return run_with<ToyGroup>(config, options);
  if (config.backend == "ed25519") return run_with<Ristretto255>(config, options);
  throw ConfigError("/backend", "unknown backend '" + config.backend + "'");
}

}  // namespace trustmesh::sim
