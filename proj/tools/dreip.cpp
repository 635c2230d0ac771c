// Copyright 2026 The dreip Authors
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

// Operator command line: simulate whole elections, verify transcripts
// offline, and run the election service.
//
// Exit codes: 0 pass, 1 verification failed, 2 unreadable or malformed
// input, 3 service startup failure, 64 usage error.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <thread>

#include "dreip/service/http.hpp"
#include "dreip/sim/simulation.hpp"
#include "dreip/verifier/verifier.hpp"

namespace {

using namespace dreip;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;
constexpr int kStartupError = 3;
constexpr int kUsage = 64;

std::string trim_trailing(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

struct SimulateArgs {
  SimulationSpec spec;
  std::string adversary = "none";
  std::string tier = "test";
  std::string out_dir;
};

int run_simulate(const SimulateArgs& a) {
  SimulationSpec spec = a.spec;
  spec.adversary = parse_adversary(a.adversary);
  spec.tier = parse_tier(a.tier);
  SimulationResult res = simulate(spec);
  if (!a.out_dir.empty()) write_simulation_outputs(res, a.out_dir);
  std::cout << res.summary().dump(2) << "\n";
  return kPass;
}

struct VerifyArgs {
  std::string config;
  std::string board;
  std::string tally;
  std::string report;
  bool json = false;
};

// Genesis fields that must agree with the operator's configuration.
std::optional<std::string> config_mismatch(const ElectionConfig& c, const ElectionManifest& m) {
  if (m.election_id != c.election_id) return "election_id differs";
  if (m.candidates != c.candidates) return "candidate list differs";
  if (m.voter_bound != c.voter_bound) return "voter bound differs";
  if (m.tier() != c.tier) return "security tier differs";
  if (m.group.value("seed", "") != to_hex(as_bytes(c.group_seed))) return "group seed differs";
  return std::nullopt;
}

int run_verify(const VerifyArgs& a) {
  std::optional<ElectionConfig> config;
  std::filesystem::path board_path = a.board;
  std::optional<std::filesystem::path> tally_path;
  if (!a.tally.empty()) tally_path = a.tally;
  if (!a.config.empty()) {
    config = ElectionConfig::load(a.config);
    if (board_path.empty() && config->board_path) board_path = *config->board_path;
    if (!tally_path && config->tally_path) tally_path = *config->tally_path;
  }
  if (board_path.empty()) throw Error(Errc::configuration, "no board file: pass --board or a config naming one");

  Chain chain = load_chain_file(board_path);
  if (chain.empty()) throw Error(Errc::parse, "board file is empty");
  ElectionManifest manifest = parse_genesis(chain.at(0).payload);
  if (config) {
    if (auto why = config_mismatch(*config, manifest)) {
      std::cerr << "board does not belong to the configured election: " << *why << "\n";
      return kFail;
    }
  }
  std::optional<std::string> tally;
  if (tally_path) tally = trim_trailing(read_file(*tally_path));

  VerificationReport report = verify_election_any(chain, tally);
  if (!a.report.empty()) write_file_atomically(a.report, report.to_json().dump(2) + "\n");
  if (a.json) {
    std::cout << report.to_json().dump(2) << "\n";
  } else {
    std::cout << report.summary();
  }
  return report.passed() ? kPass : kFail;
}

struct ServeArgs {
  std::string config;
  std::string bind;
};

std::atomic<http::ElectionHttpServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

int run_serve(const ServeArgs& a) {
  ElectionConfig config = ElectionConfig::load(a.config);
  if (!a.bind.empty()) {
    config.bind = a.bind;
    config.validate();
  }
  auto [host, port] = config.bind_host_port();

  // Bind before the election exists so a busy port leaves no files behind.
  http::ElectionHttpServer server;
  try {
    port = server.bind(host, port);
  } catch (const Error& e) {
    std::cerr << "dreip serve: " << e.what() << "\n";
    return kStartupError;
  }

  SystemRandom rng;
  auto sink = [](const std::string& line) { std::cerr << "[dreip] " << line << "\n"; };
  std::unique_ptr<ElectionApi> api;
  try {
    api = make_election_service(config, rng, sink);
  } catch (const Error& e) {
    std::cerr << "dreip serve: " << e.what() << "\n";
    return kStartupError;
  }
  server.attach(*api);
  g_server.store(&server);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "[dreip] listening on " << host << ":" << port << (api->read_only() ? " (read-only)" : "") << "\n";
  server.run();
  g_server.store(nullptr);
  std::cerr << "[dreip] stopped, head " << api->head_hash().hex() << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dreip: verifiable DRE-ip elections"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a whole election in-process and write its transcript");
  simulate_cmd->add_option("--seed", sim.spec.seed, "RNG seed; fixes every byte of the transcript");
  simulate_cmd->add_option("--voters", sim.spec.voters, "Number of voters");
  simulate_cmd->add_option("--candidates", sim.spec.candidates, "Number of candidates")->check(CLI::Range(2, 64));
  simulate_cmd->add_option("--voter-bound", sim.spec.voter_bound, "Voter bound N (default voters + 1 for 3+ candidates)");
  simulate_cmd->add_option("--audit-prob", sim.spec.audit_probability, "Probability of auditing each ballot")
      ->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--adversary", sim.adversary, "none, mutate_receipt, forge_tally or replay_nullifier")
      ->check(CLI::IsMember({"none", "mutate_receipt", "forge_tally", "replay_nullifier"}));
  simulate_cmd->add_option("--tier", sim.tier, "Group tier: test or standard")
      ->check(CLI::IsMember({"test", "standard"}));
  simulate_cmd->add_option("--election-id", sim.spec.election_id, "Election identifier");
  simulate_cmd->add_option("--out-dir", sim.out_dir, "Directory for registry, board, tally, report and shadow truth");

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Verify a board and final tally");
  verify_cmd->add_option("--config", ver.config, "Election config; supplies board and tally paths if not given");
  verify_cmd->add_option("--board", ver.board, "Board file (binary or NDJSON)");
  verify_cmd->add_option("--tally", ver.tally, "Final tally file to compare with the board's copy");
  verify_cmd->add_option("--report", ver.report, "Also write the JSON report here");
  verify_cmd->add_flag("--json", ver.json, "Print the JSON report instead of the summary");

  ServeArgs srv;
  auto* serve_cmd = app.add_subcommand("serve", "Run the election service over HTTP");
  serve_cmd->add_option("--config", srv.config, "Election config file")->required();
  serve_cmd->add_option("--bind", srv.bind, std::string("host:port; overrides the config and ") + kBindEnv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*simulate_cmd) return run_simulate(sim);
    if (*verify_cmd) return run_verify(ver);
    if (*serve_cmd) return run_serve(srv);
  } catch (const Error& e) {
    std::cerr << "dreip: " << e.what() << "\n";
    if (e.code() == Errc::configuration && *simulate_cmd) return kUsage;
    if (*serve_cmd) return kStartupError;
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "dreip: " << e.what() << "\n";
    return kInputError;
  }
  return kUsage;
}
