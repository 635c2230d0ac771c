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

#include <map>

#include "dreip/sim/simulation.hpp"
#include "gtest/gtest.h"

namespace dreip {
namespace {

std::vector<std::uint64_t> decode(unsigned long t, std::size_t n, std::uint64_t bound, std::uint64_t confirmed) {
  return decode_tally(mpz_class(t), n, bound, confirmed);
}

Errc decode_error(unsigned long t, std::size_t n, std::uint64_t bound, std::uint64_t confirmed) {
  try {
    decode(t, n, bound, confirmed);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::invalid_input;
}

TEST(DecodeTallyTest, TwoCandidatesUseTheComplement) {
  EXPECT_EQ(decode(3, 2, 0, 10), (std::vector<std::uint64_t>{7, 3}));
  EXPECT_EQ(decode(0, 2, 0, 0), (std::vector<std::uint64_t>{0, 0}));
  EXPECT_EQ(decode_error(11, 2, 0, 10), Errc::decode);
}

TEST(DecodeTallyTest, MultiCandidateReadsBaseNDigits) {
  EXPECT_EQ(decode(5 + 7 * 100, 3, 100, 12), (std::vector<std::uint64_t>{5, 7, 0}));
  EXPECT_EQ(decode(7 * 1000, 3, 1000, 7), (std::vector<std::uint64_t>{0, 7, 0}));
  EXPECT_EQ(decode_error(5 + 7 * 100, 3, 100, 13), Errc::decode);
  EXPECT_EQ(decode_error(1000000, 3, 100, 1), Errc::decode);
}

TEST(DecodeTallyTest, RandomHistogramsRoundTrip) {
  SeededRandom rng("histogram", 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> hist(4, 0);
    mpz_class t = 0;
    for (int voter = 0; voter < 50; ++voter) {
      unsigned long j = random_below(mpz_class(4), rng).get_ui();
      hist[j]++;
      mpz_class enc;
      mpz_ui_pow_ui(enc.get_mpz_t(), 1000, j);
      t += enc;
    }
    ASSERT_EQ(decode_tally(t, 4, 1000, 50), hist);
  }
}

template <class G>
class AuditConsistencyTest : public ::testing::Test {
 protected:
  G g_ = G::derive(as_bytes("audit"));
};

using Groups = ::testing::Types<ModpGroup, P256Group>;
TYPED_TEST_SUITE(AuditConsistencyTest, Groups);

TYPED_TEST(AuditConsistencyTest, CatchesEveryRevealedValueChange) {
  const auto& g = this->g_;
  const auto& f = g.field();
  SeededRandom rng("audit", 2);
  auto pk = keygen(g, rng);
  VoteEncoding enc{3, 10};
  DreMachine<TypeParam> dre(g, pk, enc, rng);
  auto encodings = enc.encodings(f);
  for (std::size_t j = 1; j <= 3; ++j) {
    dre.encrypt_ballot(j);
    Receipt<TypeParam> r = dre.decide_audit().receipt;
    EXPECT_TRUE(audit_consistency(g, pk, r));
    for (std::size_t k = 0; k < encodings.size(); ++k) {
      if (k + 1 == j) continue;
      auto other = r;
      std::get<AuditedOpening>(other.body).v = encodings[k];
      EXPECT_FALSE(audit_consistency(g, pk, other));
    }
    // r + 1 breaks all four equations individually.
    const auto& ct = r.content.ct;
    Scalar r1 = f.add(std::get<AuditedOpening>(r.body).r, f.one());
    Scalar v = std::get<AuditedOpening>(r.body).v;
    EXPECT_NE(g.exp(g.g1(), r1), ct.u);
    EXPECT_NE(g.exp(g.g2(), r1), ct.v);
    EXPECT_NE(g.mul(g.exp(pk.h, r1), g.exp(g.g1(), v)), ct.e);
    EXPECT_NE(g.exp(g.mul(pk.c, g.exp(pk.d, r.content.alpha)), r1), ct.w);
    auto bumped = r;
    std::get<AuditedOpening>(bumped.body).r = r1;
    EXPECT_FALSE(audit_consistency(g, pk, bumped));
  }
  dre.encrypt_ballot(1);
  auto confirmed = dre.decide_confirm().receipt;
  try {
    audit_consistency(g, pk, confirmed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::wrong_variant);
  }
}

SimulationSpec spec(std::size_t voters, std::size_t candidates, std::uint64_t seed, SecurityTier tier = SecurityTier::test) {
  SimulationSpec s;
  s.voters = voters;
  s.candidates = candidates;
  s.seed = seed;
  s.tier = tier;
  return s;
}

TEST(VerifyElectionTest, HonestElectionPasses) {
  auto res = simulate(spec(30, 2, 1));
  EXPECT_TRUE(res.report.passed()) << res.report.summary();
  ASSERT_TRUE(res.report.decoded_counts);
  EXPECT_EQ(*res.report.decoded_counts, res.truth_counts);
  EXPECT_EQ(res.report.confirmed, 30u);
  EXPECT_EQ(res.report.audited + res.report.confirmed, res.shadow.size());
  auto j = res.report.to_json();
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["totals"]["confirmed"], 30);
}

TEST(VerifyElectionTest, ZeroVoterElectionPasses) {
  for (auto tier : {SecurityTier::test, SecurityTier::standard}) {
    auto res = simulate(spec(0, 2, 1, tier));
    EXPECT_TRUE(res.report.passed()) << res.report.summary();
    EXPECT_EQ(*res.report.decoded_counts, (std::vector<std::uint64_t>{0, 0}));
    EXPECT_EQ(res.chain.size(), 2u);
  }
}

TEST(VerifyElectionTest, AllZeroVotesStillVerify) {
  auto g = ModpGroup::derive(as_bytes("zero-tally"));
  SeededRandom rng("zero-tally", 1);
  auto pk = keygen(g, rng);
  DreMachine<ModpGroup> dre(g, pk, {2, 0}, rng);
  BulletinBoard<ModpGroup> board(ElectionContext<ModpGroup>::create("z", g, pk, dre.receipt_key(), {"a", "b"}, 0));
  for (int i = 0; i < 10; ++i) {
    dre.encrypt_ballot(1);
    ASSERT_TRUE(board.append_receipt(to_wire(g, dre.decide_confirm().receipt)).accepted);
  }
  ASSERT_TRUE(board.post_final_tally(to_wire(g, dre.publish_final())).accepted);
  auto rep = verify_election<ModpGroup>(board.chain());
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(*rep.decoded_counts, (std::vector<std::uint64_t>{10, 0}));
}

TEST(VerifyElectionTest, RandomizedSimulationsPass) {
  SeededRandom rng("property", 1);
  for (int trial = 0; trial < 8; ++trial) {
    SimulationSpec s;
    s.candidates = 2 + random_below(mpz_class(4), rng).get_ui();
    s.voters = random_below(mpz_class(s.candidates == 2 ? 201 : 41), rng).get_ui();
    s.audit_probability = static_cast<double>(random_below(mpz_class(51), rng).get_ui()) / 100.0;
    s.seed = trial;
    // The tiny group cannot hold N^n for n >= 3 beyond a handful of voters.
    s.tier = s.candidates == 2 ? SecurityTier::test : SecurityTier::standard;
    auto res = simulate(s);
    ASSERT_TRUE(res.report.passed()) << "trial " << trial << "\n" << res.report.summary();
    ASSERT_EQ(*res.report.decoded_counts, res.truth_counts) << "trial " << trial;
  }
}

TEST(VerifyElectionTest, PostHocEditBreaksChainAndTally) {
  auto res = simulate(spec(10, 2, 4));
  auto g = ModpGroup::derive(as_bytes(res.config.group_seed));
  std::size_t target = 0;
  std::uint64_t index = 0;
  for (std::size_t h = 1; h < res.chain.size() && target == 0; ++h) {
    auto j = nlohmann::json::parse(res.chain.at(h).payload);
    if (j.contains("decision") && j["decision"] == "confirmed") {
      target = h;
      index = j["index"];
    }
  }
  ASSERT_NE(target, 0u);
  auto doc = nlohmann::ordered_json::parse(res.chain.at(target).payload);
  doc["E"] = tamper::bump_element(g, doc["E"]);

  std::vector<Block> blocks = res.chain.blocks();
  blocks[target].payload = doc.dump();
  auto naive = verify_election<ModpGroup>(Chain(blocks));
  EXPECT_FALSE(naive.chain_ok);
  EXPECT_EQ(naive.chain_break, target);
  EXPECT_FALSE(naive.tally_ok);

  auto rehashed = verify_election<ModpGroup>(replace_payload(res.chain, target, doc.dump()));
  EXPECT_TRUE(rehashed.chain_ok);
  EXPECT_FALSE(rehashed.tally_ok);
  EXPECT_EQ(rehashed.failed_equations, (std::vector<std::string>{"prod E = h^s g1^t"}));
  EXPECT_FALSE(rehashed.wellformed_ok);
  EXPECT_EQ(rehashed.failing_ballots(), std::vector<std::uint64_t>{index});
}

TEST(VerifyElectionTest, ForgedTallyFailsTheEEquation) {
  auto s = spec(10, 2, 5);
  s.adversary = Adversary::forge_tally;
  auto res = simulate(s);
  EXPECT_FALSE(res.report.passed());
  EXPECT_TRUE(res.report.chain_ok);
  EXPECT_TRUE(res.report.wellformed_ok);
  EXPECT_FALSE(res.report.auth_ok);
  auto& eqs = res.report.failed_equations;
  EXPECT_NE(std::find(eqs.begin(), eqs.end(), "prod E = h^s g1^t"), eqs.end());
}

TEST(VerifyElectionTest, MutateReceiptAdversaryIsNamed) {
  auto s = spec(10, 2, 6);
  s.adversary = Adversary::mutate_receipt;
  auto res = simulate(s);
  EXPECT_FALSE(res.report.passed());
  ASSERT_EQ(res.tampered.size(), 1u);
  EXPECT_EQ(res.report.failing_ballots().size(), 1u);
  EXPECT_NE(res.report.summary().find("FAIL"), std::string::npos);
}

TEST(VerifyElectionTest, MissingTallyIsIncomplete) {
  auto res = simulate(spec(3, 2, 7));
  std::vector<Block> blocks(res.chain.blocks().begin(), res.chain.blocks().end() - 1);
  try {
    verify_election<ModpGroup>(Chain(blocks));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::incomplete_election);
  }
  EXPECT_TRUE(verify_election<ModpGroup>(Chain(blocks), res.tally).passed());
}

TEST(VerifyElectionTest, EverySingleFieldMutationIsDetected) {
  auto s = spec(10, 2, 8);
  s.audit_probability = 0.4;
  auto res = simulate(s);
  ASSERT_TRUE(res.report.passed());
  auto g = ModpGroup::derive(as_bytes(res.config.group_seed));
  auto encodings = res.config.encoding().encodings(g.field());
  std::size_t total = 0, without_tag = 0;
  for (std::size_t h = 1; h + 1 < res.chain.size(); ++h) {
    for (const auto& m : receipt_mutations(g, res.chain.at(h).payload, std::span<const Scalar>(encodings))) {
      auto rep = verify_election<ModpGroup>(replace_payload(res.chain, h, m.payload));
      ++total;
      ASSERT_FALSE(rep.passed()) << "block " << h << " field " << m.field;
      bool algebraic = !rep.wellformed_ok || !rep.audit_ok || !rep.tally_ok;
      if (algebraic) ++without_tag;
      EXPECT_TRUE(algebraic || m.field.rfind("auth_tag", 0) == 0) << m.field;
    }
  }
  for (const auto& m : tally_mutations(g, res.tally)) {
    auto chain = replace_payload(res.chain, res.chain.size() - 1, m.payload);
    auto rep = verify_election<ModpGroup>(chain, m.payload);
    ++total;
    EXPECT_FALSE(rep.passed()) << m.field;
  }
  EXPECT_GT(total, 300u);
}

TEST(VerifyElectionTest, ReportJsonAndSummaryAgree) {
  auto s = spec(5, 3, 9, SecurityTier::standard);
  auto res = simulate(s);
  auto j = res.report.to_json();
  EXPECT_EQ(j["pass"], res.report.passed());
  EXPECT_EQ(j["decoded_counts"].size(), 3u);
  EXPECT_EQ(j["candidates"][2], "candidate-3");
  EXPECT_NE(res.report.summary().find("candidate-3"), std::string::npos);
  EXPECT_EQ(verify_election_any(res.chain).to_json(), j);
}

}  // namespace
}  // namespace dreip
