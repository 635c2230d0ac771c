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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "dreip/registry/payload.hpp"
#include "gtest/gtest.h"

namespace dreip {
namespace {

std::vector<std::string> roll_of(int n) {
  std::vector<std::string> roll;
  for (int i = 0; i < n; ++i) roll.push_back("voter-" + std::to_string(i));
  return roll;
}

std::vector<Digest> random_digests(std::size_t n, RandomSource& rng) {
  std::vector<Digest> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(hash_bytes(rng.bytes(8)));
  return out;
}

// Frozen with Python hashlib: sha256 over the raw concatenations.
TEST(IdentityCommitment, MatchesIndependentDoubleHash) {
  std::array<std::uint8_t, 32> nul{};
  std::iota(nul.begin(), nul.end(), 0);
  EXPECT_EQ(identity_commitment("voter-7", nul).hex(),
            "4b9ee4f80015e338150514ccaf1d7739278c73847e71c0f13951eecf8a948aac");
  Digest external = external_nullifier_for("election-2026");
  EXPECT_EQ(derive_nullifier_hash(external, nul).hex(),
            "2a580b5273a18cff829b29782c8594eeaaf3e0ed720796be00a9dfeb51b7d457");
}

TEST(IdentityCommitment, SeparatorRemovesConcatenationAmbiguity) {
  std::array<std::uint8_t, 2> a{'C', 'D'};
  std::array<std::uint8_t, 1> b{'D'};
  EXPECT_FALSE(identity_commitment("AB", a) == identity_commitment("ABC", b));
}

TEST(RegisterVoter, DistinctVotersGetDistinctCommitments) {
  VoterRegistry reg(roll_of(50));
  SeededRandom rng("reg", 1);
  std::set<Digest> seen;
  for (int i = 0; i < 50; ++i) {
    auto r = reg.register_voter("voter-" + std::to_string(i), rng);
    EXPECT_TRUE(seen.insert(r.commitment).second);
    EXPECT_EQ(identity_commitment(r.credential), r.commitment);
  }
  EXPECT_EQ(reg.commitments().size(), 50u);
}

TEST(RegisterVoter, RejectsDuplicateUnknownAndLateRegistrations) {
  VoterRegistry reg(roll_of(3));
  SeededRandom rng("reg", 2);
  reg.register_voter("voter-0", rng);
  try {
    reg.register_voter("voter-0", rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::already_registered);
  }
  try {
    reg.register_voter("mallory", rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_eligible);
  }
  reg.seal(rng);
  try {
    reg.register_voter("voter-1", rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::registration_closed);
  }
}

TEST(BuildTree, FourLeafRootMatchesIndependentComputation) {
  std::vector<Digest> leaves;
  for (int i = 1; i <= 4; ++i) leaves.push_back(hash_bytes("L" + std::to_string(i)));
  SeededRandom rng("unused", 0);
  MerkleTree tree = build_tree(leaves, rng);
  EXPECT_EQ(tree.root().hex(), "a92410b70a43b4593cd86f536b13ac22c24e42aa6d1ba5b3b3957c72850ca13b");
  Bytes l12, l34;
  append(l12, leaves[0].bytes());
  append(l12, leaves[1].bytes());
  append(l34, leaves[2].bytes());
  append(l34, leaves[3].bytes());
  Bytes top;
  append(top, hash_bytes(l12).bytes());
  append(top, hash_bytes(l34).bytes());
  EXPECT_EQ(tree.root(), hash_bytes(top));
  EXPECT_EQ(tree.depth(), 2u);
}

TEST(BuildTree, PadsToPowerOfTwo) {
  SeededRandom rng("pad", 3);
  auto one = build_tree(random_digests(1, rng), rng);
  EXPECT_EQ(one.depth(), 1u);
  EXPECT_EQ(one.leaf_count(), 2u);
  auto five = build_tree(random_digests(5, rng), rng);
  EXPECT_EQ(five.depth(), 3u);
  EXPECT_EQ(five.leaf_count(), 8u);
  auto eight = build_tree(random_digests(8, rng), rng);
  EXPECT_EQ(eight.leaf_count(), 8u);
  EXPECT_THROW(build_tree({}, rng), Error);
}

TEST(BuildTree, PaddingLeavesAreFreshRandomHashes) {
  SeededRandom rng("pad", 4);
  auto real = random_digests(3, rng);
  auto tree = build_tree(real, rng);
  EXPECT_TRUE(std::equal(real.begin(), real.end(), tree.leaves().begin()));
  EXPECT_FALSE(tree.leaves()[3] == real[0] || tree.leaves()[3] == real[2]);
}

TEST(ProveMembership, EightLeafTreeUsesThreeSiblingsLikeTheWorkedExample) {
  SeededRandom rng("paths", 5);
  auto tree = build_tree(random_digests(8, rng), rng);
  const auto& l = tree.leaves();
  // Leaves A..H; proving D (index 3) needs H_C, H_AB and H_EFGH.
  MerklePath path = prove_membership(tree, 3);
  ASSERT_EQ(path.siblings.size(), 3u);
  EXPECT_EQ(path.siblings[0], l[2]);
  EXPECT_EQ(path.siblings[1], hash_node(l[0], l[1]));
  EXPECT_EQ(path.siblings[2], hash_node(hash_node(l[4], l[5]), hash_node(l[6], l[7])));
  EXPECT_EQ(path.path_bits, (std::vector<bool>{true, true, false}));
  EXPECT_TRUE(verify_membership(tree.root(), l[3], path));
}

TEST(ProveMembership, DepthOneTree) {
  SeededRandom rng("paths", 6);
  auto tree = build_tree(random_digests(2, rng), rng);
  auto path = prove_membership(tree, 0);
  ASSERT_EQ(path.siblings.size(), 1u);
  EXPECT_EQ(path.siblings[0], tree.leaves()[1]);
  EXPECT_THROW(prove_membership(tree, 2), Error);
}

TEST(VerifyMembership, EveryIndexOfSixteenLeafTree) {
  SeededRandom rng("paths", 7);
  auto tree = build_tree(random_digests(16, rng), rng);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_TRUE(verify_membership(tree.root(), tree.leaves()[i], prove_membership(tree, i)));
  }
}

TEST(VerifyMembership, MutationsFail) {
  SeededRandom rng("paths", 8);
  auto tree = build_tree(random_digests(16, rng), rng);
  const Digest& leaf = tree.leaves()[9];
  auto path = prove_membership(tree, 9);
  for (std::size_t k = 0; k < path.siblings.size(); ++k) {
    auto m = path;
    m.siblings[k] = hash_bytes(rng.bytes(32));
    EXPECT_FALSE(verify_membership(tree.root(), leaf, m));
    m = path;
    m.path_bits[k] = !m.path_bits[k];
    EXPECT_FALSE(verify_membership(tree.root(), leaf, m));
  }
  auto m = path;
  m.siblings.pop_back();
  EXPECT_FALSE(verify_membership(tree.root(), leaf, m));
  m = path;
  m.leaf_index = 8;
  EXPECT_FALSE(verify_membership(tree.root(), leaf, m));
  EXPECT_FALSE(verify_membership(tree.root(), tree.leaves()[8], path));
  EXPECT_FALSE(verify_membership(hash_bytes("other"), leaf, path));
  EXPECT_FALSE(verify_membership(tree.root(), leaf, MerklePath{}));
}

TEST(RegistryFile, RoundTripsAndHoldsNoCredentialMaterial) {
  VoterRegistry reg(roll_of(5));
  SeededRandom rng("file", 9);
  std::vector<VoterCredential> creds;
  for (int i = 0; i < 5; ++i) creds.push_back(reg.register_voter("voter-" + std::to_string(i), rng).credential);
  const MerkleTree& tree = reg.seal(rng);
  std::string text = write_registry_file(tree);
  EXPECT_NE(text.find("# hash: sha256"), std::string::npos);
  EXPECT_NE(text.find("# depth: 3"), std::string::npos);
  MerkleTree back = read_registry_file(text);
  EXPECT_EQ(back.root(), tree.root());
  for (const auto& c : creds) {
    EXPECT_EQ(text.find(c.voter_id), std::string::npos);
    EXPECT_EQ(text.find(to_hex(c.internal_nullifier)), std::string::npos);
    EXPECT_EQ(text.find(identity_secret(c.voter_id, c.internal_nullifier).hex()), std::string::npos);
  }
  EXPECT_THROW(read_registry_file("garbage\n"), Error);
}

TEST(NullifierHash, DeterministicAndSeparated) {
  SeededRandom rng("nh", 10);
  Bytes alice = rng.bytes(32);
  Bytes bob = rng.bytes(32);
  Digest e1 = external_nullifier_for("election-a");
  Digest e2 = external_nullifier_for("election-b");
  EXPECT_EQ(derive_nullifier_hash(e1, alice), derive_nullifier_hash(e1, alice));
  EXPECT_FALSE(derive_nullifier_hash(e1, alice) == derive_nullifier_hash(e2, alice));
  EXPECT_FALSE(derive_nullifier_hash(e1, alice) == derive_nullifier_hash(e1, bob));
}

TEST(NullifierLedger, FreshAcceptedReplayRejected) {
  NullifierLedger ledger(external_nullifier_for("e"));
  Digest h = hash_bytes("x");
  EXPECT_EQ(ledger.check_and_record(h), LedgerOutcome::accepted);
  EXPECT_EQ(ledger.check_and_record(h), LedgerOutcome::double_vote);
  EXPECT_EQ(ledger.size(), 1u);
}

TEST(NullifierLedger, ThousandDistinctThenThousandReplays) {
  NullifierLedger ledger(external_nullifier_for("e"));
  SeededRandom rng("replay", 11);
  auto hashes = random_digests(1000, rng);
  int accepted = 0, doubles = 0;
  for (const auto& h : hashes) (ledger.check_and_record(h) == LedgerOutcome::accepted ? accepted : doubles)++;
  for (const auto& h : hashes) (ledger.check_and_record(h) == LedgerOutcome::accepted ? accepted : doubles)++;
  EXPECT_EQ(accepted, 1000);
  EXPECT_EQ(doubles, 1000);
}

TEST(NullifierLedger, AcceptedCountEqualsDistinctRegardlessOfOrder) {
  SeededRandom rng("idem", 12);
  std::mt19937 shuffle_rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto distinct = random_digests(50, rng);
    std::vector<Digest> stream;
    for (const auto& d : distinct) stream.insert(stream.end(), 1 + shuffle_rng() % 4, d);
    std::shuffle(stream.begin(), stream.end(), shuffle_rng);
    NullifierLedger ledger(external_nullifier_for("e"));
    std::size_t accepted = 0;
    for (const auto& d : stream) accepted += ledger.check_and_record(d) == LedgerOutcome::accepted;
    EXPECT_EQ(accepted, distinct.size());
  }
}

TEST(NullifierLedger, PersistsBeforeAcknowledgingAndReloads) {
  auto dir = std::filesystem::temp_directory_path() / "dreip-ledger-test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto file = dir / "ledger.txt";
  Digest ext = external_nullifier_for("e");
  {
    NullifierLedger ledger(ext, file);
    EXPECT_EQ(ledger.check_and_record(hash_bytes("a")), LedgerOutcome::accepted);
    std::ifstream in(file);
    std::string all((std::istreambuf_iterator<char>(in)), {});
    EXPECT_NE(all.find(hash_bytes("a").hex()), std::string::npos);
  }
  NullifierLedger reloaded(ext, file);
  EXPECT_EQ(reloaded.check_and_record(hash_bytes("a")), LedgerOutcome::double_vote);
  EXPECT_THROW(NullifierLedger(external_nullifier_for("other"), file), Error);
  std::filesystem::remove_all(dir);
}

TEST(NullifierLedger, WriteFailureRejectsTheAttempt) {
  auto dir = std::filesystem::temp_directory_path() / "dreip-ledger-fail";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto file = dir / "ledger.txt";
  NullifierLedger ledger(external_nullifier_for("e"), file);
  std::filesystem::remove_all(dir);  // backing directory disappears
  try {
    ledger.check_and_record(hash_bytes("z"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ledger);
  }
  EXPECT_FALSE(ledger.contains(hash_bytes("z")));
}

class PayloadTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SeededRandom rng("payload", 13);
    VoterRegistry reg(roll_of(6));
    for (int i = 0; i < 6; ++i) creds_.push_back(reg.register_voter("voter-" + std::to_string(i), rng).credential);
    tree_ = reg.seal(rng);
  }
  std::vector<VoterCredential> creds_;
  MerkleTree tree_ = MerkleTree::from_leaves({Digest{}, Digest{}});
};

TEST_F(PayloadTest, RoundTripsThroughTransportEncoding) {
  for (const auto& c : creds_) {
    ProofPayload p = make_proof_payload(c, tree_.leaves(), "election-x");
    std::string transport = encode_payload(p);
    ProofPayload back = decode_payload(transport);
    EXPECT_EQ(payload_text(back), payload_text(p));
    EXPECT_EQ(check_payload(back, tree_.root(), external_nullifier_for("election-x")), PayloadCheck::ok);
    EXPECT_EQ(payload_text(p).find(c.voter_id), std::string::npos);
    EXPECT_EQ(payload_text(p).find(to_hex(c.internal_nullifier)), std::string::npos);
  }
}

TEST_F(PayloadTest, DetectsWrongElectionAndBadMembership) {
  ProofPayload p = make_proof_payload(creds_[2], tree_.leaves(), "election-x");
  EXPECT_EQ(check_payload(p, tree_.root(), external_nullifier_for("election-y")), PayloadCheck::wrong_election);
  EXPECT_EQ(check_payload(p, hash_bytes("stale"), external_nullifier_for("election-x")), PayloadCheck::wrong_election);
  ProofPayload m = p;
  m.path.siblings[1] = hash_bytes("forged");
  EXPECT_EQ(check_payload(m, tree_.root(), external_nullifier_for("election-x")), PayloadCheck::bad_membership);
}

TEST_F(PayloadTest, UnknownCredentialIsNotEligible) {
  VoterCredential stranger{"voter-3", {}};
  try {
    make_proof_payload(stranger, tree_.leaves(), "election-x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_eligible);
  }
  EXPECT_THROW(decode_payload("!!!"), Error);
  EXPECT_THROW(decode_payload(base64url_encode(as_bytes("{\"version\":2}"))), Error);
}

}  // namespace
}  // namespace dreip
