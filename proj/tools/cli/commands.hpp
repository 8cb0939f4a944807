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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trustmesh/bytes.hpp"

namespace trustmesh::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAbort = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitConfig = 4;

struct DkgOptions {
  std::string backend = "ed25519";
  std::uint64_t seed = 0;
  std::size_t t = 0;
  std::size_t n = 0;
  std::filesystem::path out = "keys";
};

/// Writes group.json, share_<id>.hex (share packet encoding) and
/// transcript.jsonl into out.
int cmd_dkg(const DkgOptions& opts, std::ostream& out, std::ostream& err);

struct SignOptions {
  std::filesystem::path dir = "keys";
  std::vector<ParticipantId> coalition;
  std::string message;
  std::uint64_t seed = 0;
  /// Defaults to <dir>/signature.hex.
  std::optional<std::filesystem::path> out;
};

int cmd_sign(const SignOptions& opts, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::filesystem::path group = "keys/group.json";
  std::string message;
  std::filesystem::path signature = "keys/signature.hex";
};

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::string backend = "ed25519";
  std::size_t t = 3;
  std::vector<std::size_t> ns{4, 8, 16, 32, 64};
  std::size_t repetitions = 5;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> csv;
};

struct BenchRow {
  std::size_t t = 0;
  std::size_t n = 0;
  // Medians in milliseconds. Round times cover every node's work.
  double round1_ms = 0;
  double round2_ms = 0;
  double sign_ms = 0;
  // Relative standard deviation of each sample set.
  double round1_rsd = 0;
  double round2_rsd = 0;
  double sign_rsd = 0;
  std::string backend;
  std::size_t repetitions = 0;
};

/// One warm-up run, then `repetitions` timed runs per n.
std::vector<BenchRow> run_bench(const BenchOptions& opts);
std::string bench_csv_header();
std::string bench_csv_line(const BenchRow& row);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  std::optional<std::filesystem::path> scenario;
  /// Archived trace to reproduce; supplies the scenario if none is given.
  std::optional<std::filesystem::path> replay;
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> transcript;
  std::optional<std::filesystem::path> out;
  bool timings = false;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct AvssOptions {
  std::string backend = "toy";
  std::uint64_t seed = 0;
  std::size_t t = 2;
  std::size_t n = 4;
  std::uint64_t secret = 5;
  /// Dealer stops after this many deals; the rest finish by point exchange.
  std::optional<std::size_t> deliver_to;
};

int cmd_avss(const AvssOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace trustmesh::cli
