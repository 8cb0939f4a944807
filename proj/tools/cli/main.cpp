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

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace cli = trustmesh::cli;

int main(int argc, char** argv) {
  CLI::App app{"trustmesh: threshold keys and signatures across trust domains"};
  app.require_subcommand(1);

  cli::DkgOptions dkg;
  auto* dkg_cmd = app.add_subcommand("dkg", "Run key generation and write key material");
  dkg_cmd->add_option("--t", dkg.t, "Signing threshold")->required();
  dkg_cmd->add_option("--n", dkg.n, "Number of participants")->required();
  dkg_cmd->add_option("--seed", dkg.seed, "Random seed");
  dkg_cmd->add_option("--out", dkg.out, "Output directory")->capture_default_str();
  dkg_cmd->add_option("--backend", dkg.backend, "Group backend")
      ->check(CLI::IsMember({"toy", "ed25519"}))
      ->capture_default_str();

  cli::SignOptions sign;
  std::string sign_out;
  auto* sign_cmd = app.add_subcommand("sign", "Sign a message with a coalition of shares");
  sign_cmd->add_option("--dir", sign.dir, "Directory written by dkg")->capture_default_str();
  sign_cmd->add_option("--coalition", sign.coalition, "Signer ids, e.g. 1,2,3")
      ->required()
      ->delimiter(',');
  sign_cmd->add_option("--message", sign.message, "Message to sign")->required();
  sign_cmd->add_option("--seed", sign.seed, "Random seed");
  sign_cmd->add_option("--out", sign_out, "Signature file (default <dir>/signature.hex)");

  cli::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a signature against a group key");
  verify_cmd->add_option("--group", verify.group, "group.json from dkg")->capture_default_str();
  verify_cmd->add_option("--message", verify.message, "Signed message")->required();
  verify_cmd->add_option("--signature", verify.signature, "Signature file")
      ->capture_default_str();

  cli::BenchOptions bench;
  std::string bench_csv;
  auto* bench_cmd = app.add_subcommand("bench", "Time key generation and signing");
  bench_cmd->add_option("--t", bench.t, "Threshold")->capture_default_str();
  bench_cmd->add_option("--n", bench.ns, "Participant counts, e.g. 4,8,16")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--repetitions", bench.repetitions, "Timed runs per n")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--csv", bench_csv, "Also write the table here");
  bench_cmd->add_option("--backend", bench.backend, "Group backend")
      ->check(CLI::IsMember({"toy", "ed25519"}))
      ->capture_default_str();

  cli::SimulateOptions simulate;
  std::string scenario, replay, trace, transcript, sim_out;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a network scenario");
  sim_cmd->add_option("--scenario", scenario, "Scenario JSON");
  sim_cmd->add_option("--replay", replay, "Archived trace to reproduce");
  sim_cmd->add_option("--trace", trace, "Write the event trace here");
  sim_cmd->add_option("--transcript", transcript, "Write DKG transcript records here");
  sim_cmd->add_option("--out", sim_out, "Write the JSON report here instead of stdout");
  sim_cmd->add_flag("--timings", simulate.timings, "Include wall-clock phase timings");

  cli::AvssOptions avss;
  std::size_t deliver_to = 0;
  auto* avss_cmd = app.add_subcommand("avss", "Deal and reconstruct one AVSS secret");
  avss_cmd->add_option("--t", avss.t, "Threshold")->capture_default_str();
  avss_cmd->add_option("--n", avss.n, "Participants")->capture_default_str();
  avss_cmd->add_option("--secret", avss.secret, "Secret to deal")->capture_default_str();
  avss_cmd->add_option("--seed", avss.seed, "Random seed");
  auto* deliver_opt =
      avss_cmd->add_option("--deliver-to", deliver_to, "Dealer stops after this many deals");
  avss_cmd->add_option("--backend", avss.backend, "Group backend")
      ->check(CLI::IsMember({"toy", "ed25519"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  if (*dkg_cmd) return cli::cmd_dkg(dkg, std::cout, std::cerr);
  if (*sign_cmd) {
    if (!sign_out.empty()) sign.out = sign_out;
    return cli::cmd_sign(sign, std::cout, std::cerr);
  }
  if (*verify_cmd) return cli::cmd_verify(verify, std::cout, std::cerr);
  if (*bench_cmd) {
    if (!bench_csv.empty()) bench.csv = bench_csv;
    return cli::cmd_bench(bench, std::cout, std::cerr);
  }
  if (*sim_cmd) {
    if (!scenario.empty()) simulate.scenario = scenario;
    if (!replay.empty()) simulate.replay = replay;
    if (!trace.empty()) simulate.trace = trace;
    if (!transcript.empty()) simulate.transcript = transcript;
    if (!sim_out.empty()) simulate.out = sim_out;
    return cli::cmd_simulate(simulate, std::cout, std::cerr);
  }
  if (*avss_cmd) {
    if (deliver_opt->count()) avss.deliver_to = deliver_to;
    return cli::cmd_avss(avss, std::cout, std::cerr);
  }
  return cli::kExitConfig;
}
