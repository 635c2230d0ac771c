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

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dreip/board/board.hpp"
#include "dreip/registry/nullifier.hpp"
#include "dreip/registry/payload.hpp"
#include "dreip/registry/registry.hpp"
#include "dreip/service/config.hpp"
#include "dreip/verifier/verifier.hpp"

namespace dreip {

/// Receives operational log lines. Lines never carry credentials, voter
/// ids or vote choices.
using LogSink = std::function<void(const std::string&)>;

enum class SessionState { awaiting_vote, pending_decision, closed };

inline const char* to_string(SessionState s) {
  switch (s) {
    case SessionState::awaiting_vote: return "awaiting_vote";
    case SessionState::pending_decision: return "pending_decision";
    case SessionState::closed: return "closed";
  }
  return "?";
}

struct BoothSession {
  std::string token;
  Digest nullifier_hash;
  SessionState state = SessionState::awaiting_vote;
};

struct RegistryInfo {
  Digest root;
  std::size_t leaf_count = 0;
  std::size_t depth = 0;
};

struct DecisionResult {
  std::uint64_t index = 0;
  std::uint64_t height = 0;
  std::string second_part;  // second-part receipt handed to the voter
  std::string receipt;      // merged receipt, byte-identical to the board copy
  SessionState session_state = SessionState::closed;
};

/// Tier-independent face of an election service; the HTTP layer, the
/// simulator and the CLI all drive this.
class ElectionApi {
 public:
  virtual ~ElectionApi() = default;

  virtual const ElectionConfig& config() const = 0;
  virtual bool read_only() const = 0;

  virtual Registration register_voter(const std::string& voter_id) = 0;
  /// Seals the registry on first call and writes the registry file.
  virtual RegistryInfo registry_root() = 0;
  virtual std::vector<Digest> registry_leaves() = 0;

  /// Throws double_vote, bad_membership, wrong_election, busy or
  /// protocol_order on rejection.
  virtual std::string open_session(std::string_view proof_payload) = 0;
  virtual std::optional<SessionState> session_state(const std::string& token) = 0;
  virtual std::string cast_vote(const std::string& token, std::size_t candidate) = 0;
  virtual DecisionResult decide(const std::string& token, std::string_view choice) = 0;

  /// Posts the final tally; returns its wire form.
  virtual std::string close() = 0;
  virtual VerificationReport verify() = 0;

  virtual std::string genesis() = 0;
  virtual std::vector<std::string> blocks_from(std::uint64_t height) = 0;
  virtual std::string receipt(std::uint64_t index) = 0;
  virtual std::optional<std::string> final_tally() = 0;
  virtual Chain chain() = 0;
  virtual Digest head_hash() = 0;
  virtual std::vector<std::string> board_rejections() = 0;
};

template <PrimeOrderGroup G>
class ElectionService final : public ElectionApi {
 public:
  /// A configured board file that already exists means a restart: the
  /// board is reloaded and re-checked, and the service is read-only since
  /// the machine's secret aggregates did not survive.
  ElectionService(ElectionConfig config, RandomSource& rng, LogSink sink = {}, SecretTap tap = {})
      : config_(std::move(config)),
        rng_(rng),
        log_(std::move(sink)),
        g_(G::derive(as_bytes(config_.group_seed))),
        registry_(config_.roll),
        external_(external_nullifier_for(config_.election_id)) {
    config_.validate();
    if (config_.tier != G::kTier) throw Error(Errc::configuration, "service instantiated for another tier");
    config_.encoding().validate(g_.field());
    bool restart = config_.board_path && std::filesystem::exists(*config_.board_path);
    if (restart) {
      restore();
    } else {
      for (const auto& p : {config_.registry_path, config_.ledger_path, config_.spent_path, config_.tally_path}) {
        if (p && std::filesystem::exists(*p)) {
          throw Error(Errc::configuration, p->string() + " exists but the board does not; refusing to mix elections");
        }
      }
      DrePublicKey<G> pk = keygen(g_, rng_);
      dre_.emplace(g_, pk, config_.encoding(), rng_, std::move(tap));
      auto ctx = ElectionContext<G>::create(config_.election_id, g_, pk, dre_->receipt_key(), config_.candidates,
                                            config_.voter_bound);
      board_.emplace(std::move(ctx), config_.board_path);
      open_ledgers();
      log("election " + config_.election_id + " started, genesis " + board_->head_hash().hex());
    }
  }

  const ElectionConfig& config() const override { return config_; }
  bool read_only() const override { return read_only_; }
  const G& group() const { return g_; }

  Registration register_voter(const std::string& voter_id) override {
    std::lock_guard lock(mu_);
    require_writable();
    Registration r = registry_.register_voter(voter_id, rng_);
    log("registration accepted (" + std::to_string(registry_.registered_count()) + " registered)");
    return r;
  }

  RegistryInfo registry_root() override {
    std::lock_guard lock(mu_);
    if (!registry_.sealed()) {
      require_writable();
      if (registry_.registered_count() == 0) {
        // Nobody registered: publish a tree of padding leaves only.
        registry_.restore(MerkleTree::from_leaves({hash_bytes(rng_.bytes(32)), hash_bytes(rng_.bytes(32))}));
      } else {
        registry_.seal(rng_);
      }
      if (config_.registry_path) write_file_atomically(*config_.registry_path, write_registry_file(registry_.tree()));
      log("registry sealed, root " + registry_.tree().root().hex());
    }
    const auto& t = registry_.tree();
    return {t.root(), t.leaf_count(), t.depth()};
  }

  std::vector<Digest> registry_leaves() override {
    std::lock_guard lock(mu_);
    return registry_.tree().leaves();
  }

  std::string open_session(std::string_view proof_payload) override {
    std::lock_guard lock(mu_);
    require_writable();
    if (board_->closed()) throw Error(Errc::protocol_order, "voting is closed");
    if (!registry_.sealed()) throw Error(Errc::protocol_order, "registry not sealed yet");
    if (session_ && session_->state != SessionState::closed) throw Error(Errc::busy, "the booth is in use");
    ProofPayload p;
    try {
      p = decode_payload(proof_payload);
    } catch (const Error& e) {
      throw Error(Errc::bad_membership, std::string("payload does not decode: ") + e.what());
    }
    switch (check_payload(p, registry_.tree().root(), external_)) {
      case PayloadCheck::wrong_election: throw Error(Errc::wrong_election, "payload is for another registry or election");
      case PayloadCheck::bad_membership: throw Error(Errc::bad_membership, "membership path does not verify");
      case PayloadCheck::ok: break;
    }
    // The transparent proof does not tie the nullifier hash to the leaf, so
    // the leaf itself is also spent.
    if (spent_->contains(p.leaf)) {
      log("session rejected: double_vote");
      throw Error(Errc::double_vote, "this registration has already voted");
    }
    if (ledger_->check_and_record(p.nullifier_hash) == LedgerOutcome::double_vote) {
      log("session rejected: double_vote");
      throw Error(Errc::double_vote, "nullifier hash already seen");
    }
    spent_->check_and_record(p.leaf);
    session_ = BoothSession{to_hex(rng_.bytes(16)), p.nullifier_hash, SessionState::awaiting_vote};
    log("session opened");
    return session_->token;
  }

  std::optional<SessionState> session_state(const std::string& token) override {
    std::lock_guard lock(mu_);
    if (!session_ || session_->token != token) return std::nullopt;
    return session_->state;
  }

  std::string cast_vote(const std::string& token, std::size_t candidate) override {
    std::lock_guard lock(mu_);
    require_writable();
    BoothSession& s = session(token);
    if (s.state != SessionState::awaiting_vote) throw Error(Errc::protocol_order, "session is not awaiting a vote");
    auto first = dre_->encrypt_ballot(candidate);
    s.state = SessionState::pending_decision;
    log("ballot " + std::to_string(first.content.index) + " encrypted");
    return to_wire(g_, first);
  }

  DecisionResult decide(const std::string& token, std::string_view choice) override {
    std::lock_guard lock(mu_);
    require_writable();
    if (choice != "audit" && choice != "confirm") throw Error(Errc::invalid_input, "decision must be audit or confirm");
    BoothSession& s = session(token);
    if (s.state != SessionState::pending_decision) throw Error(Errc::protocol_order, "no ballot awaiting a decision");
    bool audit = choice == "audit";
    Decision<G> d = audit ? dre_->decide_audit() : dre_->decide_confirm();
    DecisionResult out;
    out.index = d.second.index;
    out.second_part = to_wire(g_, d.second);
    out.receipt = to_wire(g_, d.receipt);
    AppendOutcome appended = board_->append_receipt(out.receipt);
    if (!appended.accepted) {
      halted_ = true;
      log("board rejected ballot " + std::to_string(out.index) + ": " + appended.reason + "; booth halted");
      throw Error(Errc::board_rejected, appended.reason);
    }
    out.height = *appended.height;
    s.state = audit ? SessionState::awaiting_vote : SessionState::closed;
    out.session_state = s.state;
    log("ballot " + std::to_string(out.index) + (audit ? " audited" : " confirmed") + ", block " +
        std::to_string(out.height));
    return out;
  }

  std::string close() override {
    std::lock_guard lock(mu_);
    require_writable();
    if (session_ && session_->state == SessionState::pending_decision) {
      throw Error(Errc::protocol_order, "a ballot is awaiting a decision");
    }
    if (session_) session_->state = SessionState::closed;
    FinalTally<G> tally = dre_->publish_final();
    std::string wire = to_wire(g_, tally);
    AppendOutcome appended = board_->post_final_tally(wire);
    if (!appended.accepted) throw Error(Errc::board_rejected, appended.reason);
    if (config_.tally_path) write_file_atomically(*config_.tally_path, wire + "\n");
    log("election closed, final tally at block " + std::to_string(*appended.height));
    return wire;
  }

  VerificationReport verify() override { return verify_election<G>(chain()); }

  std::string genesis() override {
    std::lock_guard lock(mu_);
    return board_->chain().at(0).payload;
  }

  std::vector<std::string> blocks_from(std::uint64_t height) override {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    const auto& blocks = board_->chain().blocks();
    for (std::size_t h = height; h < blocks.size(); ++h) out.push_back(block_line(blocks[h]));
    return out;
  }

  std::string receipt(std::uint64_t index) override {
    std::lock_guard lock(mu_);
    return board_->get_receipt(index);
  }

  std::optional<std::string> final_tally() override {
    std::lock_guard lock(mu_);
    return board_->final_tally();
  }

  Chain chain() override {
    std::lock_guard lock(mu_);
    return board_->chain();
  }

  Digest head_hash() override {
    std::lock_guard lock(mu_);
    return board_->head_hash();
  }

  std::vector<std::string> board_rejections() override {
    std::lock_guard lock(mu_);
    return board_->rejections();
  }

 private:
  void restore() {
    Chain chain = load_chain_file(*config_.board_path);
    board_.emplace(BulletinBoard<G>::restore(chain, std::nullopt));
    const auto& m = board_->context().manifest;
    if (m.election_id != config_.election_id || m.candidates != config_.candidates ||
        m.voter_bound != config_.voter_bound || m.group != g_.describe()) {
      throw Error(Errc::configuration, "board file belongs to a different election configuration");
    }
    if (config_.registry_path && std::filesystem::exists(*config_.registry_path)) {
      registry_.restore(read_registry_file(read_file(*config_.registry_path)));
    }
    open_ledgers();
    read_only_ = true;
    log("board reloaded read-only, head " + board_->head_hash().hex());
  }

  void open_ledgers() {
    ledger_.emplace(external_, config_.ledger_path);
    spent_.emplace(external_, config_.spent_path);
  }

  void require_writable() const {
    if (read_only_) throw Error(Errc::protocol_order, "service restarted from a stored board; it is read-only");
    if (halted_) throw Error(Errc::board_rejected, "booth halted after a board rejection");
  }

  BoothSession& session(const std::string& token) {
    if (!session_ || session_->token != token) throw Error(Errc::not_found, "unknown session token");
    return *session_;
  }

  void log(const std::string& line) {
    if (log_) log_(line);
  }

  ElectionConfig config_;
  RandomSource& rng_;
  LogSink log_;
  G g_;
  VoterRegistry registry_;
  Digest external_;
  std::optional<NullifierLedger> ledger_;
  std::optional<NullifierLedger> spent_;
  std::optional<DreMachine<G>> dre_;
  std::optional<BulletinBoard<G>> board_;
  std::optional<BoothSession> session_;
  bool read_only_ = false;
  bool halted_ = false;
  std::mutex mu_;
};

inline std::unique_ptr<ElectionApi> make_election_service(ElectionConfig config, RandomSource& rng, LogSink log = {},
                                                          SecretTap tap = {}) {
  return with_group_type(config.tier, [&](auto type) -> std::unique_ptr<ElectionApi> {
    using G = typename decltype(type)::type;
    return std::make_unique<ElectionService<G>>(std::move(config), rng, std::move(log), std::move(tap));
  });
}

}  // namespace dreip
