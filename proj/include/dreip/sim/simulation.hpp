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

#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "dreip/service/service.hpp"
#include "dreip/sim/tamper.hpp"

namespace dreip {

enum class Adversary { none, mutate_receipt, forge_tally, replay_nullifier };

inline const char* to_string(Adversary a) {
  switch (a) {
    case Adversary::none: return "none";
    case Adversary::mutate_receipt: return "mutate_receipt";
    case Adversary::forge_tally: return "forge_tally";
    case Adversary::replay_nullifier: return "replay_nullifier";
  }
  return "?";
}

inline Adversary parse_adversary(std::string_view s) {
  if (s == "none") return Adversary::none;
  if (s == "mutate_receipt") return Adversary::mutate_receipt;
  if (s == "forge_tally") return Adversary::forge_tally;
  if (s == "replay_nullifier") return Adversary::replay_nullifier;
  throw Error(Errc::configuration, "unknown adversary '" + std::string(s) + "'");
}

struct SimulationSpec {
  std::size_t voters = 10;
  std::size_t candidates = 2;
  std::uint64_t voter_bound = 0;  // 0: none for two candidates, voters + 1 otherwise
  double audit_probability = 0.2;
  std::uint64_t seed = 1;
  Adversary adversary = Adversary::none;
  SecurityTier tier = SecurityTier::test;
  std::string election_id = "sim-election";
  std::string group_seed = "dreip-sim";

  /// A voter who keeps auditing confirms after this many audits.
  static constexpr int kMaxAuditsPerVoter = 8;

  void validate() const {
    if (!(audit_probability >= 0.0 && audit_probability <= 1.0)) {
      throw Error(Errc::configuration, "audit probability must lie in [0, 1]");
    }
    if (candidates < 2) throw Error(Errc::configuration, "need at least two candidates");
  }

  std::uint64_t effective_voter_bound() const {
    if (voter_bound != 0 || candidates == 2) return voter_bound;
    return std::max<std::uint64_t>(voters + 1, 2);
  }

  ElectionConfig config() const {
    ElectionConfig c;
    c.election_id = election_id;
    for (std::size_t j = 1; j <= candidates; ++j) c.candidates.push_back("candidate-" + std::to_string(j));
    c.voter_bound = effective_voter_bound();
    c.tier = tier;
    c.group_seed = group_seed;
    char id[32];
    for (std::size_t i = 1; i <= voters; ++i) {
      std::snprintf(id, sizeof id, "voter-%04zu", i);
      c.roll.emplace_back(id);
    }
    return c;
  }
};

/// Ground truth kept by the simulator for tests. No verification path
/// reads it.
struct ShadowBallot {
  std::uint64_t index = 0;
  std::size_t voter = 0;
  std::size_t candidate = 0;
  bool audited = false;
};

struct SimulationResult {
  SimulationSpec spec;
  ElectionConfig config;
  Chain chain;
  std::string tally;
  std::string registry;
  std::vector<ShadowBallot> shadow;
  std::vector<std::uint64_t> truth_counts;
  std::size_t injected_replays = 0;
  std::size_t double_vote_rejections = 0;
  std::vector<std::string> tampered;
  std::vector<std::string> log;
  VerificationReport report;

  nlohmann::ordered_json summary() const {
    nlohmann::ordered_json j;
    j["election_id"] = config.election_id;
    j["seed"] = spec.seed;
    j["tier"] = to_string(spec.tier);
    j["voters"] = spec.voters;
    j["candidates"] = spec.candidates;
    j["voter_bound"] = config.voter_bound;
    j["audit_probability"] = spec.audit_probability;
    j["adversary"] = to_string(spec.adversary);
    j["blocks"] = chain.size();
    j["head_hash"] = chain.head_hash().hex();
    j["audited"] = report.audited;
    j["confirmed"] = report.confirmed;
    j["injected_replays"] = injected_replays;
    j["double_vote_rejections"] = double_vote_rejections;
    j["tampered"] = tampered;
    j["decoded_counts"] = report.decoded_counts ? nlohmann::ordered_json(*report.decoded_counts) : nlohmann::ordered_json();
    j["verification"] = report.passed() ? "pass" : "fail";
    return j;
  }

  nlohmann::ordered_json shadow_json() const {
    nlohmann::ordered_json j;
    j["warning"] = "TEST-ONLY GROUND TRUTH. Not part of the protocol; no verification path reads this file.";
    j["counts"] = truth_counts;
    auto ballots = nlohmann::ordered_json::array();
    for (const auto& b : shadow) {
      ballots.push_back({{"index", b.index}, {"voter", b.voter}, {"candidate", b.candidate}, {"audited", b.audited}});
    }
    j["ballots"] = std::move(ballots);
    return j;
  }
};

namespace detail {

inline bool coin(RandomSource& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  auto raw = rng.bytes(8);
  std::uint64_t x = 0;
  for (auto b : raw) x = (x << 8) | b;
  return static_cast<double>(x >> 11) * 0x1.0p-53 < p;
}

template <PrimeOrderGroup G>
void apply_adversary(SimulationResult& res, const G& g) {
  const Chain& chain = res.chain;
  if (res.spec.adversary == Adversary::mutate_receipt) {
    // Multiply E of the first confirmed ballot by g1 (or, with none
    // confirmed, of the first ballot).
    std::optional<std::size_t> target;
    for (std::size_t h = 1; h < chain.size() && !target; ++h) {
      if (payload_kind(chain.at(h).payload) != "receipt") continue;
      if (nlohmann::json::parse(chain.at(h).payload)["decision"] == "confirmed") target = h;
    }
    for (std::size_t h = 1; h < chain.size() && !target; ++h) {
      if (payload_kind(chain.at(h).payload) == "receipt") target = h;
    }
    if (!target) return;
    auto doc = nlohmann::ordered_json::parse(chain.at(*target).payload);
    doc["E"] = tamper::bump_element(g, doc["E"]);
    res.tampered.push_back("ballot " + std::to_string(doc["index"].get<std::uint64_t>()) + " field E");
    res.chain = replace_payload(chain, *target, doc.dump());
  } else if (res.spec.adversary == Adversary::forge_tally) {
    auto doc = nlohmann::ordered_json::parse(res.tally);
    doc["t"] = tamper::bump_scalar(g, doc["t"]);
    res.tally = doc.dump();
    res.tampered.push_back("final tally field t");
    res.chain = replace_payload(chain, chain.size() - 1, res.tally);
  }
}

template <PrimeOrderGroup G>
SimulationResult simulate_as(const SimulationSpec& spec) {
  spec.validate();
  SimulationResult res;
  res.spec = spec;
  res.config = spec.config();
  SeededRandom machine_rng("dreip/sim/machine", spec.seed);
  SeededRandom voter_rng("dreip/sim/voters", spec.seed);
  ElectionService<G> service(res.config, machine_rng, [&](const std::string& line) { res.log.push_back(line); });

  std::vector<Registration> registrations;
  for (const auto& id : res.config.roll) registrations.push_back(service.register_voter(id));
  service.registry_root();
  std::vector<Digest> leaves = service.registry_leaves();
  res.registry = write_registry_file(MerkleTree::from_leaves(leaves));

  res.truth_counts.assign(spec.candidates, 0);
  for (std::size_t v = 0; v < registrations.size(); ++v) {
    std::string payload = encode_payload(make_proof_payload(registrations[v].credential, leaves, res.config.election_id));
    std::string token = service.open_session(payload);
    std::size_t candidate = 1 + static_cast<std::size_t>(random_below(mpz_class(static_cast<unsigned long>(spec.candidates)), voter_rng).get_ui());
    for (int audits = 0;; ++audits) {
      std::string first = service.cast_vote(token, candidate);
      bool audit = audits < SimulationSpec::kMaxAuditsPerVoter && coin(voter_rng, spec.audit_probability);
      DecisionResult d = service.decide(token, audit ? "audit" : "confirm");
      res.shadow.push_back({d.index, v + 1, candidate, audit});
      if (!audit) break;
    }
    res.truth_counts[candidate - 1]++;
    if (spec.adversary == Adversary::replay_nullifier) {
      ++res.injected_replays;
      try {
        service.open_session(payload);
      } catch (const Error& e) {
        if (e.code() == Errc::double_vote) ++res.double_vote_rejections;
      }
    }
  }
  res.tally = service.close();
  res.chain = service.chain();
  apply_adversary(res, service.group());
  res.report = verify_election<G>(res.chain, res.tally);
  return res;
}

}  // namespace detail

/// Runs a whole election in-process through the election service: register
/// every voter, seal the registry, then one booth session per voter with
/// Benaloh audits, close, optionally tamper, and verify.
inline SimulationResult simulate(const SimulationSpec& spec) {
  return with_group_type(spec.tier, [&](auto type) {
    using G = typename decltype(type)::type;
    return detail::simulate_as<G>(spec);
  });
}

/// Writes registry.txt, board.bin, board.ndjson, tally.json, report.json,
/// report.txt, shadow-truth.json and election.json (a config pointing at
/// these files) under `dir`.
inline void write_simulation_outputs(const SimulationResult& res, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomically(dir / "registry.txt", res.registry);
  save_chain_file(dir / "board.bin", res.chain);
  write_file_atomically(dir / "board.ndjson", export_ndjson(res.chain));
  write_file_atomically(dir / "tally.json", res.tally + "\n");
  write_file_atomically(dir / "report.json", res.report.to_json().dump(2) + "\n");
  write_file_atomically(dir / "report.txt", res.report.summary());
  write_file_atomically(dir / "shadow-truth.json", res.shadow_json().dump(2) + "\n");
  ElectionConfig c = res.config;
  c.registry_path = "registry.txt";
  c.board_path = "board.bin";
  c.tally_path = "tally.json";
  write_file_atomically(dir / "election.json", c.to_json().dump(2) + "\n");
}

}  // namespace dreip
