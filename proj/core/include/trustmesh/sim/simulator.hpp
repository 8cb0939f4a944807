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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustmesh/sim/config.hpp"

namespace trustmesh::sim {

struct AbortRecord {
  ParticipantId node = 0;
  std::string kind;
  std::vector<ParticipantId> culprits;
};

struct ComplaintRecord {
  ParticipantId accuser = 0;
  std::string verdict;
  std::size_t observers = 0;  // members that adjudicated it
  bool unanimous = true;
};

struct PedersenReport {
  ParticipantId dealer = 0;
  std::vector<ParticipantId> accepted_by;
  std::vector<ComplaintRecord> complaints;
  bool dealer_disqualified = false;
};

struct AvssReport {
  ParticipantId dealer = 0;
  std::vector<ParticipantId> dealt_to;
  std::vector<ParticipantId> completed;
  std::vector<ParticipantId> completed_via_exchange;
  std::vector<ParticipantId> faulty_senders;
  std::vector<ParticipantId> rejected_deal;
  bool secret_recovered = false;
};

struct DomainReport {
  std::string id;
  std::vector<ParticipantId> members;
  std::size_t threshold = 0;
  std::string status;  // ok | aborted | incomplete | verification_failed
  std::optional<std::string> group_pk;
  std::map<ParticipantId, std::string> node_group_pks;
  std::map<ParticipantId, std::string> pk_shares;
  std::map<ParticipantId, std::string> exfiltrated_sk_shares;
  std::vector<AbortRecord> aborts;
  std::vector<ParticipantId> equivocators;
  std::vector<ParticipantId> coalition;
  std::optional<std::string> message_hex;
  std::optional<std::string> signature;
  bool signature_valid = false;
  std::map<ParticipantId, std::string> node_signatures;
  std::vector<ParticipantId> gossip_flagged;
  std::optional<std::uint64_t> dkg_complete_tick;
  std::optional<std::uint64_t> gossip_start_tick;
  std::optional<std::uint64_t> termination_round;
  std::optional<std::uint64_t> finalize_tick;
  std::optional<PedersenReport> pedersen;
  std::optional<AvssReport> avss;
};

struct TraceEvent {
  std::uint64_t tick = 0;
  std::uint64_t seq = 0;
  ParticipantId from = 0;
  ParticipantId to = 0;
  std::string domain;
  std::string kind;
  std::string payload_digest;  // hex, 16 bytes
};

struct RunOptions {
  bool include_timings = false;
  bool record_trace = false;
};

struct SimReport {
  std::uint64_t seed = 0;
  std::string backend;
  std::uint64_t ticks = 0;
  std::uint64_t messages_total = 0;
  std::uint64_t messages_dropped = 0;
  std::map<std::string, std::uint64_t> messages_by_kind;
  std::string trace_hash;  // hex, 32 bytes
  std::vector<DomainReport> domains;
  /// Domains in which each node holds a signing share.
  std::map<ParticipantId, std::vector<std::string>> node_domains;
  /// Wall-clock milliseconds per phase; only filled with include_timings.
  std::map<std::string, double> timings_ms;
  std::vector<TraceEvent> trace;
  /// One record per DKG round per node (JSON lines format).
  std::vector<nlohmann::json> dkg_transcript;

  [[nodiscard]] nlohmann::json to_json() const;
  /// 0 all domains ok, 3 any signature failed verification, 2 otherwise.
  [[nodiscard]] int exit_code() const;
  [[nodiscard]] const DomainReport* domain(const std::string& id) const;
};

/// Runs the scenario on the backend named in config.backend. Deterministic:
/// the same config yields the same report (timings aside) and trace hash.
SimReport run_simulation(const SimConfig& config, const RunOptions& options = {});

nlohmann::json trace_event_json(const TraceEvent& e);

}  // namespace trustmesh::sim
