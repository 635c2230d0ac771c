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

#include <gtest/gtest.h>

#include "dreip/sim/simulation.hpp"
#include "test_support.hpp"

namespace dreip {
namespace {

SimulationSpec spec_with(std::uint64_t seed, std::size_t voters, Adversary adversary = Adversary::none) {
  SimulationSpec s;
  s.seed = seed;
  s.voters = voters;
  s.adversary = adversary;
  return s;
}

TEST(Simulation, FixedSeedReproducesTranscriptBytes) {
  for (auto tier : {SecurityTier::test, SecurityTier::standard}) {
    SimulationSpec s = spec_with(42, 6);
    s.tier = tier;
    s.candidates = 3;
    auto a = simulate(s);
    auto b = simulate(s);
    EXPECT_EQ(a.chain.head_hash(), b.chain.head_hash());
    EXPECT_EQ(export_ndjson(a.chain), export_ndjson(b.chain));
    EXPECT_EQ(a.tally, b.tally);
    EXPECT_EQ(a.registry, b.registry);
    s.seed = 43;
    EXPECT_NE(simulate(s).chain.head_hash(), a.chain.head_hash());
  }
}

TEST(Simulation, DecodedCountsMatchShadowTruth) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimulationSpec s = spec_with(seed, 8);
    s.candidates = 3;  // N = 9 and 9^3 < q in the test group
    s.audit_probability = 0.3;
    auto res = simulate(s);
    ASSERT_TRUE(res.report.passed()) << res.report.summary();
    ASSERT_TRUE(res.report.decoded_counts.has_value());
    EXPECT_EQ(*res.report.decoded_counts, res.truth_counts);
    std::size_t audited = 0;
    for (const auto& b : res.shadow) audited += b.audited ? 1 : 0;
    EXPECT_EQ(res.report.audited, audited);
    EXPECT_EQ(res.report.confirmed, 8u);
  }
}

TEST(Simulation, ReplayAdversaryCountsEveryInjectedReplay) {
  auto res = simulate(spec_with(7, 9, Adversary::replay_nullifier));
  EXPECT_EQ(res.injected_replays, 9u);
  EXPECT_EQ(res.double_vote_rejections, 9u);
  EXPECT_TRUE(res.report.passed());
  EXPECT_EQ(res.summary().at("double_vote_rejections"), 9);
}

TEST(Simulation, ZeroVotersIsValidEmptyElection) {
  auto res = simulate(spec_with(1, 0));
  EXPECT_TRUE(res.report.passed()) << res.report.summary();
  EXPECT_EQ(res.report.confirmed, 0u);
  EXPECT_EQ(*res.report.decoded_counts, (std::vector<std::uint64_t>{0, 0}));
  EXPECT_EQ(res.chain.size(), 2u);  // genesis and final tally
}

TEST(Simulation, AlwaysAuditingVoterConfirmsAfterCap) {
  SimulationSpec s = spec_with(3, 2);
  s.audit_probability = 1.0;
  auto res = simulate(s);
  EXPECT_TRUE(res.report.passed());
  EXPECT_EQ(res.report.audited, 2u * SimulationSpec::kMaxAuditsPerVoter);
  EXPECT_EQ(res.report.confirmed, 2u);
}

TEST(Simulation, MutateReceiptNamesTheBallot) {
  auto res = simulate(spec_with(5, 8, Adversary::mutate_receipt));
  EXPECT_FALSE(res.report.passed());
  ASSERT_EQ(res.tampered.size(), 1u);
  auto failing = res.report.failing_ballots();
  ASSERT_FALSE(failing.empty());
  EXPECT_NE(res.tampered[0].find("ballot " + std::to_string(failing.front())), std::string::npos);
  EXPECT_TRUE(res.report.chain_ok);
}

TEST(Simulation, ForgedTallyNamesEquations) {
  auto res = simulate(spec_with(5, 8, Adversary::forge_tally));
  EXPECT_FALSE(res.report.passed());
  EXPECT_FALSE(res.report.tally_ok);
  EXPECT_FALSE(res.report.failed_equations.empty());
  EXPECT_TRUE(res.report.failing_ballots().empty());
}

TEST(Simulation, InvalidSpecsRejected) {
  SimulationSpec s;
  s.audit_probability = 1.5;
  EXPECT_THROW(simulate(s), Error);
  s.audit_probability = 0.2;
  s.candidates = 1;
  EXPECT_THROW(simulate(s), Error);
  s.candidates = 3;
  s.voter_bound = 5;
  s.voters = 5;  // bound must exceed the roll
  EXPECT_THROW(simulate(s), Error);
}

TEST(Simulation, OutputsRoundTripThroughFiles) {
  testing::ScratchDir dir("sim-out");
  auto res = simulate(spec_with(11, 5));
  write_simulation_outputs(res, dir.path());
  for (const char* f : {"registry.txt", "board.bin", "board.ndjson", "tally.json", "report.json", "report.txt",
                        "shadow-truth.json", "election.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(load_chain_file(dir / "board.bin").head_hash(), res.chain.head_hash());
  EXPECT_EQ(load_chain_file(dir / "board.ndjson").head_hash(), res.chain.head_hash());
  auto shadow = nlohmann::json::parse(read_file(dir / "shadow-truth.json"));
  EXPECT_NE(shadow.at("warning").get<std::string>().find("TEST-ONLY"), std::string::npos);
  auto config = ElectionConfig::load(dir / "election.json");
  EXPECT_EQ(config.board_path, dir / "board.bin");
  EXPECT_EQ(read_registry_file(read_file(dir / "registry.txt")).root(),
            read_registry_file(res.registry).root());
}

}  // namespace
}  // namespace dreip
