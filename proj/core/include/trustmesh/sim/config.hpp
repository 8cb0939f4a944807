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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustmesh/bytes.hpp"

namespace trustmesh::sim {

/// Schema violation, carrying the JSON pointer of the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct DelayModel {
  enum class Kind { Fixed, Uniform };
  Kind kind = Kind::Fixed;
  std::uint64_t lo = 1;  // ticks; equals hi for Fixed
  std::uint64_t hi = 1;
};

enum class Behavior { Crash, CorruptShares, Equivocate, Silent, ForgePartial };

const char* to_string(Behavior b);

struct AdversarySpec {
  ParticipantId node = 0;
  Behavior behavior = Behavior::Crash;
  std::uint64_t at_tick = 0;  // Crash only
};

struct PedersenSpec {
  bool enabled = false;
  ParticipantId dealer = 0;  // 0: lowest member id
};

struct AvssSpec {
  bool enabled = false;
  ParticipantId dealer = 0;  // 0: lowest member id
  std::optional<std::uint64_t> secret;
  /// Dealer crashes after dealing to this many other members.
  std::optional<std::size_t> deliver_to;
};

struct DomainSpec {
  std::string id;
  std::vector<ParticipantId> members;
  std::size_t threshold = 0;
  std::string message;
  bool sign = true;
  /// Report every member's signing share, as if all were compromised.
  bool exfiltrate = false;
  PedersenSpec pedersen;
  AvssSpec avss;
};

struct GossipSpec {
  unsigned c = 4;
  std::uint64_t broadcast_prob_num = 2;
  /// Signing coalition size; defaults to the domain threshold.
  std::optional<std::size_t> contributions_required;
};

struct SimConfig {
  std::uint64_t seed = 0;
  std::size_t nodes = 0;
  std::string backend = "ed25519";
  std::uint64_t epoch = 0;
  std::vector<DomainSpec> domains;
  DelayModel delay;
  std::vector<AdversarySpec> adversary;
  GossipSpec gossip;
  std::uint64_t round_timeout = 20;
  std::uint64_t max_ticks = 400;
};

/// Parses and validates; throws ConfigError naming the JSON path.
SimConfig parse_config(const nlohmann::json& doc);
SimConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const SimConfig& config);

/// Structural checks that depend on the backend (id range).
void validate(const SimConfig& config, std::uint64_t max_participant_id);

}  // namespace trustmesh::sim
