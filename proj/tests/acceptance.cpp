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

// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "dreip/nizk/poly_identity.hpp"
#include "dreip/service/service.hpp"
#include "dreip/sim/simulation.hpp"
#include "dreip/sim/tamper.hpp"
#include "nizk_fixtures.hpp"
#include "test_support.hpp"

namespace {

using namespace dreip;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few problems of a criterion.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  std::size_t checks() const { return checks_; }
  std::size_t failures() const { return failures_; }
  Outcome outcome(std::string detail) const {
    if (failures_ == 0) return {true, std::move(detail)};
    std::string d = std::to_string(failures_) + " of " + std::to_string(checks_) + " checks failed";
    for (const auto& n : notes_) d += "; " + n;
    return {false, d};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double x, int digits = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

Outcome hash_vector() {
  const std::string expected = "185f8db32271fe25f561a6fc938b2e264306ec304eda518007d1764826381969";
  std::string got = hash_bytes("Hello").hex();
  return {got == expected, "H(\"Hello\") = " + got.substr(0, 12) + "..."};
}

Outcome honest_elections() {
  auto t0 = std::chrono::steady_clock::now();
  Tally tally;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimulationSpec s;
    s.voters = 100;
    s.candidates = 2;
    s.audit_probability = 0.2;
    s.seed = seed;
    auto res = simulate(s);
    const auto& r = res.report;
    tally.check(r.passed() && r.chain_ok && r.auth_ok && r.wellformed_ok && r.audit_ok && r.tally_ok,
                "seed " + std::to_string(seed) + " failed verification");
    tally.check(r.decoded_counts && *r.decoded_counts == res.truth_counts,
                "seed " + std::to_string(seed) + " counts differ from shadow truth");
  }
  double secs = seconds_since(t0);
  tally.check(secs < 10.0, "took " + fixed(secs) + " s, target < 10 s");
  return tally.outcome("20 seeds x 100 voters, all verified, counts = truth");
}

Outcome multi_candidate() {
  auto t0 = std::chrono::steady_clock::now();
  Tally tally;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimulationSpec s;
    s.voters = 50;
    s.candidates = 4;
    s.voter_bound = 1000;
    s.tier = SecurityTier::standard;  // 1000^4 exceeds the test group order
    s.seed = seed;
    auto res = simulate(s);
    tally.check(res.report.passed(), "seed " + std::to_string(seed) + " failed verification");
    tally.check(res.report.decoded_counts && *res.report.decoded_counts == res.truth_counts,
                "seed " + std::to_string(seed) + " histogram differs");
  }
  double secs = seconds_since(t0);
  tally.check(secs < 10.0, "took " + fixed(secs) + " s, target < 10 s");
  return tally.outcome("20 seeds x 50 voters, N = 1000, P-256, histograms = truth");
}

Outcome tamper_detection() {
  auto t0 = std::chrono::steady_clock::now();
  SimulationSpec s;
  s.voters = 10;
  s.audit_probability = 0.5;
  s.seed = 2;
  auto res = simulate(s);
  ModpGroup g = ModpGroup::derive(as_bytes(s.group_seed));
  auto encodings = res.config.encoding().encodings(g.field());
  Tally tally;
  tally.check(res.report.passed(), "honest transcript does not verify");
  tally.check(res.report.audited > 0 && res.report.confirmed > 0, "transcript lacks audited or confirmed ballots");
  std::size_t mutations = 0, algebraic = 0;
  std::map<std::string, std::size_t> fields;
  for (std::size_t h = 1; h + 1 < res.chain.size(); ++h) {
    for (const auto& m : receipt_mutations(g, res.chain.at(h).payload, std::span<const Scalar>(encodings))) {
      auto rep = verify_election<ModpGroup>(replace_payload(res.chain, h, m.payload));
      ++mutations;
      ++fields[m.field.substr(0, m.field.find('.'))];
      tally.check(!rep.passed(), "block " + std::to_string(h) + " field " + m.field + " undetected");
      if (!rep.wellformed_ok || !rep.audit_ok || !rep.tally_ok) ++algebraic;
    }
  }
  for (const auto& m : tally_mutations(g, res.tally)) {
    auto rep = verify_election<ModpGroup>(replace_payload(res.chain, res.chain.size() - 1, m.payload), m.payload);
    ++mutations;
    ++fields["tally." + m.field.substr(0, m.field.find('.'))];
    tally.check(!rep.passed(), "tally field " + m.field + " undetected");
  }
  double secs = seconds_since(t0);
  tally.check(secs < 60.0, "took " + fixed(secs) + " s, target < 60 s");
  return tally.outcome(std::to_string(mutations) + "/" + std::to_string(mutations) + " mutations over " +
                       std::to_string(fields.size()) + " field kinds detected (" + std::to_string(algebraic) +
                       " receipt mutations caught without the auth tag)");
}

Outcome double_vote() {
  SimulationSpec s;
  s.voters = 100;
  s.adversary = Adversary::replay_nullifier;
  s.seed = 5;
  auto res = simulate(s);
  Tally tally;
  tally.check(res.injected_replays == 100, "injected " + std::to_string(res.injected_replays));
  tally.check(res.double_vote_rejections == 100,
              "double_vote rejections " + std::to_string(res.double_vote_rejections));
  std::size_t confirmed = 0;
  for (std::size_t h = 1; h < res.chain.size(); ++h) {
    if (payload_kind(res.chain.at(h).payload) != "receipt") continue;
    if (nlohmann::json::parse(res.chain.at(h).payload).at("decision") == "confirmed") ++confirmed;
  }
  tally.check(confirmed == 100, std::to_string(confirmed) + " confirmed ballots on the board");
  tally.check(res.report.passed(), "board does not verify");
  return tally.outcome("100 replays -> 100 double_vote rejections, 100 confirmed ballots");
}

Outcome merkle_suite() {
  SeededRandom rng("acceptance/merkle", 1);
  Tally tally;
  std::size_t proofs = 0, mutations = 0;
  for (std::size_t depth = 1; depth <= 4; ++depth) {
    const std::size_t width = std::size_t{1} << depth;
    std::vector<Digest> leaves;
    for (std::size_t i = 0; i < width; ++i) leaves.push_back(hash_bytes(rng.bytes(32)));
    MerkleTree tree = MerkleTree::from_leaves(leaves);
    tally.check(tree.depth() == depth, "depth mismatch");
    for (std::size_t i = 0; i < width; ++i) {
      MerklePath path = tree.prove(i);
      ++proofs;
      tally.check(verify_membership(tree.root(), leaves[i], path), "leaf " + std::to_string(i) + " fails");
      auto rejects = [&](const Digest& root, const Digest& leaf, const MerklePath& p, const std::string& what) {
        ++mutations;
        tally.check(!verify_membership(root, leaf, p), "depth " + std::to_string(depth) + ": " + what + " accepted");
      };
      for (std::size_t k = 0; k < depth; ++k) {
        MerklePath p = path;
        auto raw = p.siblings[k].raw();
        raw[k % 32] ^= 0x80;
        p.siblings[k] = Digest(raw);
        rejects(tree.root(), leaves[i], p, "sibling flip");
        p = path;
        p.path_bits[k] = !p.path_bits[k];
        rejects(tree.root(), leaves[i], p, "path bit flip");
      }
      auto leaf = leaves[i].raw();
      leaf[31] ^= 1;
      rejects(tree.root(), Digest(leaf), path, "leaf flip");
      auto root = tree.root().raw();
      root[0] ^= 1;
      rejects(Digest(root), leaves[i], path, "root flip");
      MerklePath shorter = path;
      shorter.siblings.pop_back();
      shorter.path_bits.pop_back();
      rejects(tree.root(), leaves[i], shorter, "truncated path");
      MerklePath longer = path;
      longer.siblings.push_back(leaves[0]);
      longer.path_bits.push_back(false);
      rejects(tree.root(), leaves[i], longer, "extended path");
    }
    // Padding: every real-leaf count up to the width.
    for (std::size_t real = 1; real <= width; ++real) {
      std::vector<Digest> commitments(leaves.begin(), leaves.begin() + static_cast<std::ptrdiff_t>(real));
      MerkleTree padded = MerkleTree::build(commitments, rng);
      for (std::size_t i = 0; i < real; ++i) {
        ++proofs;
        tally.check(verify_membership(padded.root(), commitments[i], padded.prove(i)), "padded real leaf fails");
      }
    }
  }
  return tally.outcome(std::to_string(proofs) + " proofs verify, " + std::to_string(mutations) +
                       " path mutations rejected, depths 1-4");
}

template <PrimeOrderGroup G>
void nizk_completeness(const G& g, Tally& tally, std::size_t instances) {
  SeededRandom rng("acceptance/nizk", static_cast<std::uint64_t>(G::kTier));
  const ScalarField& f = g.field();
  for (std::size_t i = 0; i < instances; ++i) {
    Scalar x = random_scalar(f, rng);
    const auto& base = i % 2 == 0 ? g.g1() : g.g2();
    auto y = g.exp(base, x);
    Transcript ctx("acceptance/dlog");
    ctx.absorb_u64(i);
    auto proof = prove_dlog(g, x, base, y, ctx, rng);
    auto parsed = parse_dlog_proof(g, serialize(g, proof));
    tally.check(parsed && verify_dlog(g, *parsed, base, y, ctx), "dlog instance " + std::to_string(i));
  }
  auto pk = testing::random_public_key(g, rng);
  auto encodings = testing::encodings_of(f, {0, 1});
  for (std::size_t i = 0; i < instances; ++i) {
    std::size_t j = 1 + i % 2;
    auto b = testing::encrypt_raw(g, pk, encodings[j - 1], rng);
    auto proof = prove_wellformed(g, pk, b.ct, b.alpha, encodings, j, b.r, rng);
    auto parsed = parse_wellformed_proof(g, serialize(g, proof));
    tally.check(parsed && verify_wellformed(g, pk, b.ct, b.alpha, encodings, *parsed),
                "well-formedness instance " + std::to_string(i));
  }
}

Outcome nizk_suite() {
  Tally tally;
  auto tiny = ModpGroup::derive(as_bytes("acceptance-nizk"));
  auto standard = P256Group::derive(as_bytes("acceptance-nizk"));
  nizk_completeness(tiny, tally, 1000);
  nizk_completeness(standard, tally, 1000);
  std::size_t completeness = tally.checks();

  SeededRandom rng("acceptance/flips", 1);
  const ScalarField& f = tiny.field();
  std::size_t flips = 0, accepted = 0;
  for (int i = 0; i < 50; ++i) {
    Scalar x = random_scalar(f, rng);
    auto y = tiny.exp(tiny.g1(), x);
    Transcript ctx("acceptance/dlog-flip");
    Bytes raw = serialize(tiny, prove_dlog(tiny, x, tiny.g1(), y, ctx, rng));
    flips += raw.size() * 8;
    accepted += testing::count_accepted_bit_flips(raw, [&](const Bytes& m) {
      auto p = parse_dlog_proof(tiny, m);
      return p && verify_dlog(tiny, *p, tiny.g1(), y, ctx);
    });
  }
  auto pk = testing::random_public_key(tiny, rng);
  for (int i = 0; i < 50; ++i) {
    auto encodings = i % 2 == 0 ? testing::encodings_of(f, {0, 1}) : testing::encodings_of(f, {1, 5, 25});
    std::size_t j = 1 + static_cast<std::size_t>(i) % encodings.size();
    auto b = testing::encrypt_raw(tiny, pk, encodings[j - 1], rng);
    Bytes raw = serialize(tiny, prove_wellformed(tiny, pk, b.ct, b.alpha, encodings, j, b.r, rng));
    flips += raw.size() * 8;
    accepted += testing::count_accepted_bit_flips(raw, [&](const Bytes& m) {
      auto p = parse_wellformed_proof(tiny, m);
      return p && verify_wellformed(tiny, pk, b.ct, b.alpha, encodings, *p);
    });
  }
  tally.check(accepted == 0, std::to_string(accepted) + " bit-flipped proofs accepted");
  return tally.outcome(std::to_string(completeness) + " honest proofs verify (10^3 dlog + 10^3 well-formedness per tier); " +
                       std::to_string(flips) + " tiny-group bit flips all rejected");
}

struct ShadowBooth {
  explicit ShadowBooth(std::uint64_t seed)
      : g(ModpGroup::derive(as_bytes("acceptance-aggregate"))),
        rng("acceptance/aggregate", seed),
        pk(keygen(g, rng)),
        dre(g, pk, VoteEncoding{2, 0}, rng, [this](std::uint64_t i, const Scalar& r, const Scalar& v) {
          secrets[i] = {r, v};
        }) {}

  ModpGroup g;
  SeededRandom rng;
  DrePublicKey<ModpGroup> pk;
  std::map<std::uint64_t, std::pair<Scalar, Scalar>> secrets;
  DreMachine<ModpGroup> dre;
};

Outcome aggregate_consistency() {
  Tally tally;
  std::size_t steps = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ShadowBooth b(seed);
    const auto& g = b.g;
    const ScalarField& f = g.field();
    SeededRandom coin("acceptance/interleave", seed);
    Scalar s1 = f.zero(), s = f.zero(), t = f.zero(), m = f.zero();
    auto n1 = g.identity(), n = g.identity();
    const std::size_t length = 1 + coin.bytes(1)[0] % 30;
    bool ok = true;
    for (std::size_t step = 0; step < length && ok; ++step) {
      std::size_t candidate = 1 + coin.bytes(1)[0] % 2;
      auto first = b.dre.encrypt_ballot(candidate);
      const auto& [r, v] = b.secrets.at(first.content.index);
      s1 = f.add(s1, r);
      n1 = g.mul(n1, first.content.ct.u);
      if (coin.bytes(1)[0] % 3 == 0) {
        b.dre.decide_audit();
      } else {
        b.dre.decide_confirm();
        s = f.add(s, r);
        t = f.add(t, v);
        m = f.add(m, f.mul(r, first.content.alpha));
        n = g.mul(n, first.content.ct.u);
      }
      const auto& st = b.dre.state();
      ok = st.s1 == s1 && st.s == s && st.t == t && st.m == m && st.n == n && st.n1 == n1;
      ++steps;
    }
    tally.check(ok, "interleaving " + std::to_string(seed) + " diverged from the shadow state");
  }
  return tally.outcome("1000 interleavings (" + std::to_string(steps) + " ballots) match t, s, s1, m, n, n1");
}

Outcome schwartz_zippel() {
  const ScalarField f(mpz_class(1019));
  SeededRandom rng("acceptance/sz", 1);
  const std::size_t trials = 100000;
  std::size_t false_consistent = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    std::vector<Scalar> a(6), b(6);
    for (auto& c : a) c = random_scalar(f, rng);
    for (auto& c : b) c = random_scalar(f, rng);
    a[5] = random_exponent(f, rng);  // degree exactly 5
    b[5] = random_exponent(f, rng);
    if (a == b) continue;
    auto r = poly_identity_demo(f, a, b, rng);
    if (r.verdict == PolyVerdict::consistent) ++false_consistent;
  }
  const double bound = 5.0 / 1019.0;
  const double rate = static_cast<double>(false_consistent) / trials;
  const double sigma = std::sqrt(bound * (1 - bound) / trials);
  const double limit = bound + 3 * sigma;
  return {rate <= limit, "rate " + fixed(rate, 5) + " <= " + fixed(limit, 5) + " (5/1019 + 3 sigma), " +
                             std::to_string(false_consistent) + " of " + std::to_string(trials)};
}

Outcome leakage_scans() {
  Tally tally;
  // Machine state: scanned after each decision for the secrets of decided
  // ballots (once two ballots are confirmed, so s is a genuine sum), and
  // for the aggregates after publication.
  {
    auto g = P256Group::derive(as_bytes("acceptance-leak"));
    SeededRandom rng("acceptance/leak", 1);
    auto pk = keygen(g, rng);
    std::map<std::uint64_t, std::pair<Scalar, Scalar>> secrets;
    DreMachine<P256Group> dre(g, pk, VoteEncoding{4, 1000}, rng,
                              [&](std::uint64_t i, const Scalar& r, const Scalar& v) { secrets[i] = {r, v}; });
    const auto& f = g.field();
    std::vector<std::uint64_t> decided;
    for (std::size_t j : {2, 3, 4, 1, 2, 3, 1, 4}) {
      auto first = dre.encrypt_ballot(j);
      if (j == 4) {
        dre.decide_audit();
      } else {
        dre.decide_confirm();
      }
      decided.push_back(first.content.index);
      if (dre.state().confirmed.size() < 2) continue;
      std::string snap = dre.snapshot().dump();
      for (auto i : decided) {
        tally.check(snap.find(f.to_hex(secrets.at(i).first)) == std::string::npos, "state holds r of a decided ballot");
        tally.check(snap.find(f.to_hex(secrets.at(i).second)) == std::string::npos, "state holds v of a decided ballot");
      }
    }
    auto before = dre.snapshot();
    dre.publish_final();
    std::string after = dre.snapshot().dump();
    for (const char* key : {"s", "s1", "m"}) {
      tally.check(after.find(before[key].get<std::string>()) == std::string::npos,
                  std::string("state keeps ") + key + " after publication");
    }
  }
  // Service: log lines and every persisted file.
  {
    testing::ScratchDir dir("acceptance-leak");
    ElectionConfig cfg;
    cfg.election_id = "leak-scan";
    cfg.candidates = {"a", "b"};
    cfg.tier = SecurityTier::standard;
    cfg.roll = {"voter-a", "voter-b", "voter-c"};
    cfg.registry_path = dir / "registry.txt";
    cfg.board_path = dir / "board.bin";
    cfg.ledger_path = dir / "nullifiers.log";
    cfg.spent_path = dir / "spent.log";
    cfg.tally_path = dir / "tally.json";
    std::vector<std::string> log;
    std::map<std::uint64_t, Scalar> randomness;
    SeededRandom rng("acceptance/leak-service", 2);
    ElectionService<P256Group> svc(
        cfg, rng, [&](const std::string& line) { log.push_back(line); },
        [&](std::uint64_t i, const Scalar& r, const Scalar&) { randomness[i] = r; });
    std::vector<Registration> regs;
    for (const auto& id : cfg.roll) regs.push_back(svc.register_voter(id));
    svc.registry_root();
    auto leaves = svc.registry_leaves();
    std::vector<std::string> payloads;
    std::vector<std::uint64_t> confirmed;
    for (std::size_t i = 0; i < regs.size(); ++i) {
      payloads.push_back(encode_payload(make_proof_payload(regs[i].credential, leaves, cfg.election_id)));
      std::string token = svc.open_session(payloads.back());
      svc.cast_vote(token, 1 + i % 2);
      svc.decide(token, "audit");
      svc.cast_vote(token, 1 + i % 2);
      confirmed.push_back(svc.decide(token, "confirm").index);
    }
    svc.close();
    std::string logs;
    for (const auto& l : log) logs += l + "\n";
    std::string files;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
      std::ifstream in(e.path(), std::ios::binary);
      files.append(std::istreambuf_iterator<char>(in), {});
    }
    const auto& f = svc.group().field();
    for (std::size_t i = 0; i < regs.size(); ++i) {
      const auto& c = regs[i].credential;
      tally.check((logs + files).find(to_hex(c.internal_nullifier)) == std::string::npos, "internal nullifier leaked");
      tally.check((logs + files).find(c.voter_id) == std::string::npos, "voter id leaked");
      tally.check(logs.find(decode_payload(payloads[i]).nullifier_hash.hex()) == std::string::npos,
                  "nullifier hash logged");
    }
    for (auto i : confirmed) {
      tally.check((logs + files).find(f.to_hex(randomness.at(i))) == std::string::npos, "confirmed r leaked");
    }
    tally.check(logs.find("candidate") == std::string::npos, "log names a vote");
  }
  return tally.outcome(std::to_string(tally.checks()) + " scans of machine state, logs and files found no secrets");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dreip acceptance suite"};
  std::string only;
  app.add_option("--only", only, "Run only criteria whose name contains this text");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"hash-vector", hash_vector},
      {"honest-election", honest_elections},
      {"multi-candidate", multi_candidate},
      {"tamper-detection", tamper_detection},
      {"double-vote", double_vote},
      {"merkle-suite", merkle_suite},
      {"nizk-suite", nizk_suite},
      {"aggregate-consistency", aggregate_consistency},
      {"schwartz-zippel", schwartz_zippel},
      {"leakage-scans", leakage_scans},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && name.find(only) == std::string::npos) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double secs = seconds_since(t0);
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << std::left << std::setw(22) << name << std::right << std::setw(7)
              << fixed(secs) << " s  " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
