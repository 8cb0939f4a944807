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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "trustmesh/avss.hpp"
#include "trustmesh/dkg.hpp"
#include "trustmesh/ristretto255.hpp"
#include "trustmesh/sim/simulator.hpp"
#include "trustmesh/signing.hpp"
#include "trustmesh/toy_group.hpp"

namespace trustmesh::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
int with_backend(const std::string& name, F&& f) {
  if (name == "toy") return f(std::type_identity<ToyGroup>{});
  if (name == "ed25519") return f(std::type_identity<Ristretto255>{});
  throw UsageError("unknown backend \"" + name + "\" (expected toy or ed25519)");
}

std::string hex(ByteView b) { return to_hex(b); }

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw UsageError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw UsageError("cannot write " + p.string());
  out << text;
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

const Bytes& cli_crs() {
  static const Bytes crs = default_crs("trustmesh-cli", 0);
  return crs;
}

template <class G>
typename G::Element element_from_hex(const std::string& h, const std::string& what) {
  try {
    if (auto e = G::Element::decode(from_hex(h))) return *e;
  } catch (const std::invalid_argument&) {
  }
  throw UsageError("malformed " + what);
}

// ---------------------------------------------------------------- dkg

template <class G>
int dkg_impl(const DkgOptions& o, std::ostream& out, std::ostream& err) {
  if (o.t < 1 || o.t > o.n) throw UsageError("need 1 <= t <= n");
  if (o.n > G::kMaxParticipantId) {
    throw UsageError("backend supports at most " + std::to_string(G::kMaxParticipantId) +
                     " participants");
  }
  const auto members = id_range(o.n);
  const SeededRng rng(o.seed);
  std::vector<DkgParticipant<G>> nodes;
  for (auto id : members) nodes.emplace_back(id, members, o.t, cli_crs());

  std::vector<json> transcript;
  std::map<ParticipantId, DkgRound1Broadcast<G>> broadcasts;
  for (auto& node : nodes) {
    auto node_rng = rng.fork("dkg/" + std::to_string(node.id()));
    auto b = node.round1(node_rng);
    json commitment = json::array();
    for (const auto& e : b.commitment.entries) commitment.push_back(hex(e.to_bytes()));
    transcript.push_back({{"round", 1},
                          {"node", node.id()},
                          {"commitment", commitment},
                          {"proof",
                           {{"R", hex(b.proof.commitment.to_bytes())},
                            {"mu", hex(b.proof.response.to_bytes())}}}});
    broadcasts.emplace(node.id(), std::move(b));
  }
  for (auto& node : nodes) {
    if (auto abort = node.verify_round1(broadcasts)) {
      err << "dkg aborted at node " << node.id() << ": " << abort->describe() << "\n";
      return kExitAbort;
    }
  }
  std::map<ParticipantId, std::map<ParticipantId, typename G::Scalar>> inbox;
  for (auto& node : nodes) {
    json sent = json::array();
    for (auto& [to, mu] : node.round2_send()) {
      inbox[to][node.id()] = mu;
      sent.push_back(to);
    }
    transcript.push_back({{"round", 2}, {"node", node.id()}, {"sent_to", sent}});
  }
  std::vector<DkgKeys<G>> keys;
  for (auto& node : nodes) {
    auto r = node.round2_finalize(inbox[node.id()]);
    if (!r) {
      err << "dkg aborted at node " << node.id() << ": " << r.abort().describe() << "\n";
      return kExitAbort;
    }
    keys.push_back(std::move(r).value());
  }

  fs::create_directories(o.out);
  const auto& k0 = keys.front();
  json group{{"backend", std::string(G::kName)},
             {"threshold", o.t},
             {"members", members},
             {"crs", hex(cli_crs())},
             {"group_pk", hex(k0.group_pk.to_bytes())}};
  json shares = json::object();
  for (const auto& [id, pk] : k0.peer_pk_shares) shares[std::to_string(id)] = hex(pk.to_bytes());
  group["pk_shares"] = shares;
  write_text(o.out / "group.json", group.dump(2) + "\n");
  for (const auto& k : keys) {
    const SharePacket<G> packet{k.id, k.sk_share, std::nullopt};
    write_text(o.out / ("share_" + std::to_string(k.id) + ".hex"), hex(packet.encode()) + "\n");
  }
  std::string lines;
  for (const auto& rec : transcript) lines += rec.dump() + "\n";
  write_text(o.out / "transcript.jsonl", lines);

  out << "dkg " << o.t << "-of-" << o.n << " on " << G::kName << "\n"
      << "group_pk " << hex(k0.group_pk.to_bytes()) << "\n"
      << "transcript: " << o.n << " round-1 broadcasts, " << o.n * (o.n - 1)
      << " round-2 shares, all verified\n"
      << "wrote group.json, " << o.n << " share files and transcript.jsonl to "
      << o.out.string() << "\n";
  return kExitOk;
}

// ------------------------------------------------------- sign / verify

struct GroupFile {
  json doc;
  std::string backend;
  std::size_t threshold = 0;
  std::vector<ParticipantId> members;
};

GroupFile load_group(const fs::path& path) {
  GroupFile g;
  try {
    g.doc = json::parse(read_text(path));
    g.backend = g.doc.at("backend").get<std::string>();
    g.threshold = g.doc.at("threshold").get<std::size_t>();
    g.members = g.doc.at("members").get<std::vector<ParticipantId>>();
    (void)g.doc.at("group_pk").get<std::string>();
    (void)g.doc.at("pk_shares");
  } catch (const json::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
  return g;
}

template <class G>
std::map<ParticipantId, typename G::Element> pk_shares_of(const GroupFile& g) {
  std::map<ParticipantId, typename G::Element> out;
  for (const auto& item : g.doc.at("pk_shares").items()) {
    const std::string h = item.value();
    out[static_cast<ParticipantId>(std::stoul(item.key()))] =
        element_from_hex<G>(h, "pk share " + item.key());
  }
  return out;
}

template <class G>
int sign_impl(const SignOptions& o, const GroupFile& g, std::ostream& out, std::ostream& err) {
  std::set<ParticipantId> distinct(o.coalition.begin(), o.coalition.end());
  if (distinct.size() != o.coalition.size()) throw UsageError("coalition lists an id twice");
  if (o.coalition.size() < g.threshold) {
    err << "refusing to sign: coalition of " << o.coalition.size()
        << " cannot reach the threshold of " << g.threshold << "\n";
    return kExitConfig;
  }
  const auto group_pk = element_from_hex<G>(g.doc.at("group_pk").get<std::string>(), "group_pk");
  const auto pk_shares = pk_shares_of<G>(g);
  std::vector<DkgKeys<G>> keys;
  for (auto id : o.coalition) {
    if (std::find(g.members.begin(), g.members.end(), id) == g.members.end()) {
      throw UsageError("participant " + std::to_string(id) + " is not a group member");
    }
    const auto file = o.dir / ("share_" + std::to_string(id) + ".hex");
    SharePacket<G> packet;
    try {
      packet = SharePacket<G>::decode(from_hex(trim(read_text(file))));
    } catch (const std::invalid_argument& e) {
      throw UsageError(file.string() + ": " + e.what());
    }
    if (packet.id != id) throw UsageError(file.string() + " holds the share of another id");
    DkgKeys<G> k;
    k.id = id;
    k.members = g.members;
    k.threshold = g.threshold;
    k.sk_share = packet.value;
    k.pk_share = G::mul_generator(packet.value);
    k.group_pk = group_pk;
    k.peer_pk_shares = pk_shares;
    keys.push_back(std::move(k));
  }
  const Bytes message(o.message.begin(), o.message.end());
  auto sig = run_signing<G>(keys, o.coalition, message, SeededRng(o.seed));
  if (!sig) {
    err << "signing aborted: " << sig.abort().describe() << "\n";
    return kExitAbort;
  }
  if (!verify<G>(group_pk, message, sig.value())) {
    err << "aggregated signature does not verify\n";
    return kExitInvalid;
  }
  const auto h = hex(sig.value().encode());
  write_text(o.out.value_or(o.dir / "signature.hex"), h + "\n");
  out << h << "\n";
  return kExitOk;
}

template <class G>
int verify_impl(const VerifyOptions& o, const GroupFile& g, std::ostream& out, std::ostream& err) {
  const auto group_pk = element_from_hex<G>(g.doc.at("group_pk").get<std::string>(), "group_pk");
  std::optional<Signature<G>> sig;
  try {
    sig = Signature<G>::decode(from_hex(trim(read_text(o.signature))));
  } catch (const std::invalid_argument&) {
  }
  const Bytes message(o.message.begin(), o.message.end());
  if (sig && verify<G>(group_pk, message, *sig)) {
    out << "valid\n";
    return kExitOk;
  }
  err << "invalid signature\n";
  return kExitInvalid;
}

// -------------------------------------------------------------- bench

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

double rsd(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size() - 1);
  return mean > 0 ? std::sqrt(var) / mean : 0;
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Sample {
  double round1 = 0, round2 = 0, sign = 0;
};

template <class G>
Sample bench_once(std::size_t t, std::size_t n, const SeededRng& rng) {
  const auto members = id_range(n);
  std::vector<DkgParticipant<G>> nodes;
  for (auto id : members) nodes.emplace_back(id, members, t, cli_crs());
  std::vector<SeededRng> rngs;
  for (auto id : members) rngs.push_back(rng.fork("dkg/" + std::to_string(id)));
  Sample s;

  auto start = Clock::now();
  std::map<ParticipantId, DkgRound1Broadcast<G>> broadcasts;
  for (std::size_t i = 0; i < n; ++i) broadcasts.emplace(nodes[i].id(), nodes[i].round1(rngs[i]));
  for (auto& node : nodes) {
    if (node.verify_round1(broadcasts)) throw std::logic_error("benchmark dkg aborted");
  }
  s.round1 = ms_since(start);

  start = Clock::now();
  std::map<ParticipantId, std::map<ParticipantId, typename G::Scalar>> inbox;
  for (auto& node : nodes) {
    for (auto& [to, mu] : node.round2_send()) inbox[to][node.id()] = mu;
  }
  std::vector<DkgKeys<G>> keys;
  for (auto& node : nodes) keys.push_back(node.round2_finalize(inbox[node.id()]).value());
  s.round2 = ms_since(start);

  const auto coalition = id_range(t);
  const Bytes message{'b', 'e', 'n', 'c', 'h'};
  start = Clock::now();
  auto sig = run_signing<G>(keys, coalition, message, rng.fork("sign"));
  s.sign = ms_since(start);
  if (!sig || !verify<G>(keys[0].group_pk, message, sig.value())) {
    throw std::logic_error("benchmark signature failed");
  }
  return s;
}

template <class G>
std::vector<BenchRow> bench_impl(const BenchOptions& o) {
  std::vector<BenchRow> rows;
  for (auto n : o.ns) {
    if (o.t < 1 || o.t > n) throw UsageError("need 1 <= t <= n for every n");
    if (n > G::kMaxParticipantId) throw UsageError("n exceeds the backend's participant limit");
    const SeededRng base(o.seed);
    (void)bench_once<G>(o.t, n, base.fork("warmup"));
    std::vector<double> r1, r2, sg;
    for (std::size_t rep = 0; rep < o.repetitions; ++rep) {
      const auto s = bench_once<G>(o.t, n, base.fork("rep/" + std::to_string(rep)));
      r1.push_back(s.round1);
      r2.push_back(s.round2);
      sg.push_back(s.sign);
    }
    rows.push_back({o.t, n, median(r1), median(r2), median(sg), rsd(r1), rsd(r2), rsd(sg),
                    std::string(G::kName), o.repetitions});
  }
  return rows;
}

// ----------------------------------------------------------- simulate

constexpr const char* kTraceFormat = "trustmesh-trace/1";

void write_trace(const fs::path& path, const sim::SimConfig& config, const sim::SimReport& r) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path.string());
  json header{{"format", kTraceFormat},
              {"scenario", sim::to_json(config)},
              {"trace_hash", r.trace_hash},
              {"events", r.trace.size()}};
  f << header.dump() << "\n";
  for (const auto& e : r.trace) f << sim::trace_event_json(e).dump() << "\n";
}

json read_trace_header(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path.string());
  std::string line;
  std::getline(f, line);
  try {
    auto h = json::parse(line);
    if (h.value("format", "") != kTraceFormat || !h.contains("scenario") ||
        !h.contains("trace_hash")) {
      throw UsageError(path.string() + ": not a trustmesh trace");
    }
    return h;
  } catch (const json::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

// --------------------------------------------------------------- avss

template <class G>
int avss_impl(const AvssOptions& o, std::ostream& out, std::ostream& err) {
  if (o.t < 1 || o.t > o.n) throw UsageError("need 1 <= t <= n");
  if (o.n > G::kMaxParticipantId) throw UsageError("n exceeds the backend's participant limit");
  if constexpr (std::is_same_v<G, ToyGroup>) {
    if (o.secret >= ToyGroup::kOrder) throw UsageError("toy secrets must be below 11");
  }
  const auto deliver = o.deliver_to.value_or(o.n);
  if (deliver > o.n) throw UsageError("deliver-to exceeds n");

  SeededRng rng(o.seed);
  const auto secret = G::Scalar::from_u64(o.secret);
  const auto dealing = avss_deal<G>(secret, o.t, o.n, rng);
  const auto members = id_range(o.n);
  std::vector<AvssNode<G>> nodes;
  for (auto id : members) nodes.emplace_back(id, o.t, members);

  std::deque<AvssPoint<G>> queue;
  for (std::size_t i = 0; i < deliver; ++i) {
    for (auto& p : nodes[i].on_deal(dealing.deals[i])) queue.push_back(std::move(p));
  }
  while (!queue.empty()) {
    auto p = std::move(queue.front());
    queue.pop_front();
    for (auto& q : nodes[p.recipient - 1].on_point(p)) queue.push_back(std::move(q));
  }

  out << "Secret=" << o.secret << " t=" << o.t << " n=" << o.n << " dealt to " << deliver
      << "\n";
  bool all_complete = true, all_verified = true;
  std::vector<std::pair<ParticipantId, typename G::Scalar>> shares;
  for (const auto& node : nodes) {
    out << "node " << node.id() << ": ";
    if (!node.complete()) {
      out << "incomplete\n";
      all_complete = false;
      continue;
    }
    const bool ok =
        avss_verify_share(dealing.commitment, node.id(), node.share(), node.share_blinding());
    all_verified = all_verified && ok;
    out << (node.completed_from_deal() ? "from deal" : "via point exchange")
        << ", Verified share: " << (ok ? "true" : "false") << "\n";
    shares.emplace_back(node.id(), node.share());
  }
  if (shares.size() < o.t) {
    err << "too few complete nodes to recover the secret\n";
    return kExitAbort;
  }
  shares.resize(o.t);
  const auto recovered = avss_recover_secret<G>(shares);
  if constexpr (std::is_same_v<G, ToyGroup>) {
    out << "Recovered secret=" << recovered.value() << "\n";
  } else {
    out << "Recovered secret=" << hex(recovered.to_bytes()) << "\n";
  }
  const bool match = recovered == secret;
  out << "Recovered secret matches: " << (match ? "true" : "false") << "\n";
  if (!all_verified || !match) return kExitInvalid;
  return all_complete ? kExitOk : kExitAbort;
}

template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const sim::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int cmd_dkg(const DkgOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    return with_backend(opts.backend, [&](auto tag) {
      return dkg_impl<typename decltype(tag)::type>(opts, out, err);
    });
  });
}

int cmd_sign(const SignOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto g = load_group(opts.dir / "group.json");
    return with_backend(g.backend, [&](auto tag) {
      return sign_impl<typename decltype(tag)::type>(opts, g, out, err);
    });
  });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto g = load_group(opts.group);
    return with_backend(g.backend, [&](auto tag) {
      return verify_impl<typename decltype(tag)::type>(opts, g, out, err);
    });
  });
}

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
  if (opts.repetitions < 1) throw UsageError("repetitions must be at least 1");
  std::vector<BenchRow> rows;
  with_backend(opts.backend, [&](auto tag) {
    rows = bench_impl<typename decltype(tag)::type>(opts);
    return 0;
  });
  return rows;
}

std::string bench_csv_header() {
  return "t,n,round1_ms,round2_ms,sign_ms,round1_rsd,round2_rsd,sign_rsd,backend,repetitions";
}

std::string bench_csv_line(const BenchRow& r) {
  std::ostringstream s;
  s << r.t << ',' << r.n << std::fixed << std::setprecision(3) << ',' << r.round1_ms << ','
    << r.round2_ms << ',' << r.sign_ms << std::setprecision(4) << ',' << r.round1_rsd << ','
    << r.round2_rsd << ',' << r.sign_rsd << ',' << r.backend << ',' << r.repetitions;
  return s.str();
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto rows = run_bench(opts);
    std::string csv = bench_csv_header() + "\n";
    for (const auto& r : rows) csv += bench_csv_line(r) + "\n";
    out << csv;
    if (opts.csv) write_text(*opts.csv, csv);
    return kExitOk;
  });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::optional<json> archived;
    if (opts.replay) archived = read_trace_header(*opts.replay);
    sim::SimConfig config;
    if (opts.scenario) {
      config = sim::load_config(*opts.scenario);
    } else if (archived) {
      config = sim::parse_config(archived->at("scenario"));
    } else {
      throw UsageError("simulate needs --scenario or --replay");
    }
    const auto report =
        sim::run_simulation(config, {opts.timings, opts.trace.has_value()});
    const auto doc = report.to_json().dump(2) + "\n";
    if (opts.out) {
      write_text(*opts.out, doc);
      for (const auto& d : report.domains) {
        out << "domain " << d.id << ": " << d.status;
        if (d.signature) out << (d.signature_valid ? ", signature valid" : ", signature INVALID");
        out << "\n";
      }
      out << "trace_hash " << report.trace_hash << "\n";
    } else {
      out << doc;
    }
    if (opts.trace) write_trace(*opts.trace, config, report);
    if (opts.transcript) {
      std::string lines;
      for (const auto& rec : report.dkg_transcript) lines += rec.dump() + "\n";
      write_text(*opts.transcript, lines);
    }
    if (archived) {
      const auto want = archived->at("trace_hash").get<std::string>();
      if (want != report.trace_hash) {
        err << "replay diverged: archived trace hash " << want << ", replayed "
            << report.trace_hash << "\n";
        return kExitInvalid;
      }
      err << "replay reproduced trace hash " << want << "\n";
    }
    return report.exit_code();
  });
}

int cmd_avss(const AvssOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    return with_backend(opts.backend, [&](auto tag) {
      return avss_impl<typename decltype(tag)::type>(opts, out, err);
    });
  });
}

}  // namespace trustmesh::cli
