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

#include "trustmesh/sim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace trustmesh::sim {

using nlohmann::json;

const char* to_string(Behavior b) {
  switch (b) {
    case Behavior::Crash: return "crash";
    case Behavior::CorruptShares: return "corrupt_shares";
    case Behavior::Equivocate: return "equivocate";
    case Behavior::Silent: return "silent";
    case Behavior::ForgePartial: return "forge_partial";
  }
  return "unknown";
}

namespace {

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : node_.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        throw ConfigError(path_ + "/" + k, "unknown field");
      }
    }
  }

  [[nodiscard]] bool has(const char* key) const { return node_.contains(key); }
  [[nodiscard]] std::string at(const char* key) const { return path_ + "/" + key; }

  [[nodiscard]] const json& require(const char* key) const {
    if (!node_.contains(key)) throw ConfigError(at(key), "required field missing");
    return node_.at(key);
  }

  [[nodiscard]] std::uint64_t u64(const char* key) const {
    const auto& v = require(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(at(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  [[nodiscard]] std::uint64_t u64_or(const char* key, std::uint64_t fallback) const {
    return has(key) ? u64(key) : fallback;
  }

  [[nodiscard]] std::string str(const char* key) const {
    const auto& v = require(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }
  [[nodiscard]] std::string str_or(const char* key, std::string fallback) const {
    return has(key) ? str(key) : fallback;
  }

  [[nodiscard]] bool boolean_or(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "expected a boolean");
    return v.get<bool>();
  }

  [[nodiscard]] const json& array(const char* key) const {
    const auto& v = require(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array");
    return v;
  }

  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
};

std::vector<ParticipantId> parse_ids(const json& arr, const std::string& path) {
  std::vector<ParticipantId> ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& v = arr[i];
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0 ||
        v.get<std::uint64_t>() > UINT32_MAX) {
      throw ConfigError(path + "/" + std::to_string(i), "expected a participant id >= 1");
    }
    ids.push_back(v.get<ParticipantId>());
  }
  return ids;
}

DelayModel parse_delay(const json& node, const std::string& path) {
  Reader r(node, path);
  r.allow_only({"kind", "ticks", "lo", "hi"});
  DelayModel d;
  const auto kind = r.str("kind");
  if (kind == "fixed") {
    d.kind = DelayModel::Kind::Fixed;
    d.lo = d.hi = r.u64("ticks");
  } else if (kind == "uniform") {
    d.kind = DelayModel::Kind::Uniform;
    d.lo = r.u64("lo");
    d.hi = r.u64("hi");
    if (d.hi < d.lo) throw ConfigError(r.at("hi"), "must be >= lo");
  } else {
    throw ConfigError(r.at("kind"), "expected \"fixed\" or \"uniform\"");
  }
  if (d.lo < 1) throw ConfigError(path, "delays must be at least one tick");
  return d;
}

Behavior parse_behavior(const std::string& s, const std::string& path) {
  for (auto b : {Behavior::Crash, Behavior::CorruptShares, Behavior::Equivocate, Behavior::Silent,
                 Behavior::ForgePartial}) {
    if (s == to_string(b)) return b;
  }
  throw ConfigError(path, "unknown behavior \"" + s + "\"");
}

DomainSpec parse_domain(const json& node, const std::string& path) {
  Reader r(node, path);
  r.allow_only({"id", "members", "threshold", "message", "sign", "exfiltrate", "pedersen_vss",
                "avss"});
  DomainSpec d;
  d.id = r.str("id");
  d.members = parse_ids(r.array("members"), r.at("members"));
  d.threshold = r.u64("threshold");
  d.message = r.str_or("message", "trustmesh domain " + d.id);
  d.sign = r.boolean_or("sign", true);
  d.exfiltrate = r.boolean_or("exfiltrate", false);
  if (r.has("pedersen_vss")) {
    Reader p(node.at("pedersen_vss"), r.at("pedersen_vss"));
    p.allow_only({"enabled", "dealer"});
    d.pedersen.enabled = p.boolean_or("enabled", true);
    d.pedersen.dealer = static_cast<ParticipantId>(p.u64_or("dealer", 0));
  }
  if (r.has("avss")) {
    Reader a(node.at("avss"), r.at("avss"));
    a.allow_only({"enabled", "dealer", "secret", "deliver_to"});
    d.avss.enabled = a.boolean_or("enabled", true);
    d.avss.dealer = static_cast<ParticipantId>(a.u64_or("dealer", 0));
    if (a.has("secret")) d.avss.secret = a.u64("secret");
    if (a.has("deliver_to")) d.avss.deliver_to = a.u64("deliver_to");
  }
  return d;
}

}  // namespace

SimConfig parse_config(const json& doc) {
  Reader r(doc, "");
  r.allow_only({"seed", "nodes", "backend", "epoch", "domains", "delay", "adversary", "gossip",
                "round_timeout", "max_ticks"});
  SimConfig c;
  c.seed = r.u64("seed");
  c.nodes = r.u64("nodes");
  c.backend = r.str_or("backend", "ed25519");
  if (c.backend != "ed25519" && c.backend != "toy") {
    throw ConfigError(r.at("backend"), "expected \"ed25519\" or \"toy\"");
  }
  c.epoch = r.u64_or("epoch", 0);
  c.round_timeout = r.u64_or("round_timeout", c.round_timeout);
  c.max_ticks = r.u64_or("max_ticks", c.max_ticks);
  if (r.has("delay")) c.delay = parse_delay(doc.at("delay"), r.at("delay"));

  const auto& domains = r.array("domains");
  for (std::size_t i = 0; i < domains.size(); ++i) {
    c.domains.push_back(parse_domain(domains[i], r.at("domains") + "/" + std::to_string(i)));
  }
  if (r.has("adversary")) {
    const auto& adv = r.array("adversary");
    for (std::size_t i = 0; i < adv.size(); ++i) {
      const auto path = r.at("adversary") + "/" + std::to_string(i);
      Reader a(adv[i], path);
      a.allow_only({"node", "behavior", "at_tick"});
      AdversarySpec s;
      s.node = static_cast<ParticipantId>(a.u64("node"));
      s.behavior = parse_behavior(a.str("behavior"), a.at("behavior"));
      s.at_tick = a.u64_or("at_tick", 0);
      c.adversary.push_back(s);
    }
  }
  if (r.has("gossip")) {
    Reader g(doc.at("gossip"), r.at("gossip"));
    g.allow_only({"c", "broadcast_prob_num", "contributions_required"});
    c.gossip.c = static_cast<unsigned>(g.u64_or("c", 4));
    c.gossip.broadcast_prob_num = g.u64_or("broadcast_prob_num", 2);
    if (g.has("contributions_required")) {
      c.gossip.contributions_required = g.u64("contributions_required");
    }
    if (c.gossip.c < 4) throw ConfigError(g.at("c"), "success parameter must be >= 4");
  }
  return c;
}

void validate(const SimConfig& c, std::uint64_t max_participant_id) {
  if (c.nodes == 0) throw ConfigError("/nodes", "must be at least 1");
  if (c.nodes > max_participant_id) {
    throw ConfigError("/nodes", "backend supports at most " + std::to_string(max_participant_id) +
                                    " participants");
  }
  if (c.domains.empty()) throw ConfigError("/domains", "at least one domain required");
  std::set<std::string> domain_ids;
  for (std::size_t i = 0; i < c.domains.size(); ++i) {
    const auto& d = c.domains[i];
    const auto path = "/domains/" + std::to_string(i);
    if (!domain_ids.insert(d.id).second) throw ConfigError(path + "/id", "duplicate domain id");
    if (d.members.empty()) throw ConfigError(path + "/members", "domain has no members");
    std::set<ParticipantId> seen;
    for (std::size_t k = 0; k < d.members.size(); ++k) {
      const auto m = d.members[k];
      const auto mpath = path + "/members/" + std::to_string(k);
      if (m > c.nodes) throw ConfigError(mpath, "node id exceeds node count");
      if (!seen.insert(m).second) throw ConfigError(mpath, "duplicate member");
    }
    if (d.threshold < 1 || d.threshold > d.members.size()) {
      throw ConfigError(path + "/threshold", "must satisfy 1 <= t <= |members|");
    }
    const auto coalition = c.gossip.contributions_required.value_or(d.threshold);
    if (d.sign && (coalition < d.threshold || coalition > d.members.size())) {
      throw ConfigError("/gossip/contributions_required",
                        "must lie between the threshold and the member count of domain " + d.id);
    }
    if (d.pedersen.enabled) {
      if (d.threshold < 2 || d.members.size() < 2) {
        throw ConfigError(path + "/pedersen_vss", "needs threshold >= 2");
      }
      if (d.pedersen.dealer && !seen.count(d.pedersen.dealer)) {
        throw ConfigError(path + "/pedersen_vss/dealer", "dealer is not a member");
      }
    }
    if (d.avss.enabled) {
      if (d.avss.dealer && !seen.count(d.avss.dealer)) {
        throw ConfigError(path + "/avss/dealer", "dealer is not a member");
      }
      if (d.avss.deliver_to && *d.avss.deliver_to >= d.members.size()) {
        throw ConfigError(path + "/avss/deliver_to", "must be below the member count");
      }
    }
  }
  for (std::size_t i = 0; i < c.adversary.size(); ++i) {
    const auto& a = c.adversary[i];
    if (a.node == 0 || a.node > c.nodes) {
      throw ConfigError("/adversary/" + std::to_string(i) + "/node", "unknown node");
    }
  }
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const SimConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["nodes"] = c.nodes;
  j["backend"] = c.backend;
  j["epoch"] = c.epoch;
  j["round_timeout"] = c.round_timeout;
  j["max_ticks"] = c.max_ticks;
  if (c.delay.kind == DelayModel::Kind::Fixed) {
    j["delay"] = {{"kind", "fixed"}, {"ticks", c.delay.lo}};
  } else {
    j["delay"] = {{"kind", "uniform"}, {"lo", c.delay.lo}, {"hi", c.delay.hi}};
  }
  j["domains"] = json::array();
  for (const auto& d : c.domains) {
    json dj{{"id", d.id},       {"members", d.members}, {"threshold", d.threshold},
            {"message", d.message}, {"sign", d.sign},   {"exfiltrate", d.exfiltrate}};
    if (d.pedersen.enabled) dj["pedersen_vss"] = {{"enabled", true}, {"dealer", d.pedersen.dealer}};
    if (d.avss.enabled) {
      json a{{"enabled", true}, {"dealer", d.avss.dealer}};
      if (d.avss.secret) a["secret"] = *d.avss.secret;
      if (d.avss.deliver_to) a["deliver_to"] = *d.avss.deliver_to;
      dj["avss"] = a;
    }
    j["domains"].push_back(dj);
  }
  j["adversary"] = json::array();
  for (const auto& a : c.adversary) {
    json aj{{"node", a.node}, {"behavior", to_string(a.behavior)}};
    if (a.behavior == Behavior::Crash) aj["at_tick"] = a.at_tick;
    j["adversary"].push_back(aj);
  }
  j["gossip"] = {{"c", c.gossip.c}, {"broadcast_prob_num", c.gossip.broadcast_prob_num}};
  if (c.gossip.contributions_required) {
    j["gossip"]["contributions_required"] = *c.gossip.contributions_required;
  }
  return j;
}

}  // namespace trustmesh::sim
