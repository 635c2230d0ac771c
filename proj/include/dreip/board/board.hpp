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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dreip/board/chain.hpp"
#include "dreip/verifier/checks.hpp"

namespace dreip {

struct AppendOutcome {
  bool accepted = false;
  std::string reason;
  std::optional<std::uint64_t> height;
};

/// The board for one DRE machine. Every receipt is checked against the
/// board's own products of U before it is chained; rejected receipts are
/// dropped and logged.
template <PrimeOrderGroup G>
class BulletinBoard {
 public:
  /// Starts a new board; with a file, the file must not exist yet.
  explicit BulletinBoard(ElectionContext<G> ctx, std::optional<std::filesystem::path> file = std::nullopt,
                         BlockClock clock = {})
      : ctx_(std::move(ctx)), file_(std::move(file)), clock_(std::move(clock)) {
    n_ = n1_ = ctx_.g.identity();
    if (file_) {
      if (std::filesystem::exists(*file_)) throw Error(Errc::ledger, "board file already exists: " + file_->string());
      append_durably(*file_, as_bytes(kBoardMagic), Errc::ledger);
    }
    commit(genesis_payload(ctx_.manifest));
  }

  /// Rebuilds from a stored chain, re-running every gatekeeping check.
  /// Further appends go to `file` (the file the chain was read from).
  static BulletinBoard restore(const Chain& chain, std::optional<std::filesystem::path> file = std::nullopt,
                               BlockClock clock = {}) {
    auto check = verify_chain(chain);
    if (!check.ok) throw Error(Errc::board_rejected, "stored chain breaks at height " + std::to_string(*check.first_break));
    if (chain.empty()) throw Error(Errc::parse, "stored chain has no genesis block");
    BulletinBoard board(ElectionContext<G>::from_manifest(parse_genesis(chain.at(0).payload)), std::nullopt, clock);
    if (board.chain_.at(0).payload != chain.at(0).payload) {
      throw Error(Errc::board_rejected, "genesis block differs from its rebuild");
    }
    board.chain_ = Chain({chain.at(0)});
    for (std::size_t h = 1; h < chain.size(); ++h) {
      const Block& b = chain.at(h);
      std::string kind = payload_kind(b.payload);
      AppendOutcome out;
      if (kind == "final-tally") out = board.post_final_tally(b.payload, b.timestamp);
      else out = board.append_receipt(b.payload, b.timestamp);
      if (!out.accepted) throw Error(Errc::board_rejected, "stored block " + std::to_string(h) + ": " + out.reason);
    }
    board.file_ = std::move(file);
    return board;
  }

  AppendOutcome append_receipt(std::string_view bytes) { return append_receipt(bytes, std::nullopt); }
  AppendOutcome post_final_tally(std::string_view bytes) { return post_final_tally(bytes, std::nullopt); }

  const ElectionContext<G>& context() const { return ctx_; }
  const Chain& chain() const { return chain_; }
  Digest head_hash() const { return chain_.head_hash(); }
  std::uint64_t last_index() const { return last_index_; }
  bool closed() const { return tally_height_.has_value(); }
  const std::vector<std::string>& rejections() const { return rejections_; }
  const typename G::Element& product_all() const { return n1_; }
  const typename G::Element& product_confirmed() const { return n_; }

  /// Exact stored bytes of ballot `index`.
  const std::string& get_receipt(std::uint64_t index) const {
    auto it = heights_.find(index);
    if (it == heights_.end()) throw Error(Errc::not_found, "no receipt with index " + std::to_string(index));
    return chain_.at(it->second).payload;
  }

  std::optional<std::string> final_tally() const {
    if (!tally_height_) return std::nullopt;
    return chain_.at(*tally_height_).payload;
  }

 private:
  AppendOutcome append_receipt(std::string_view bytes, std::optional<std::int64_t> timestamp) {
    if (closed()) throw Error(Errc::protocol_order, "the final tally is already on the board");
    const G& g = ctx_.g;
    std::optional<Receipt<G>> r;
    try {
      r = parse_receipt(g, bytes);
    } catch (const Error& e) {
      return reject("unparseable receipt: " + std::string(e.what()));
    }
    if (r->content.index != last_index_ + 1) {
      throw Error(Errc::ordering, "receipt index " + std::to_string(r->content.index) + " does not follow " +
                                      std::to_string(last_index_));
    }
    auto n1 = g.mul(n1_, r->content.ct.u);
    auto n = r->audited() ? n_ : g.mul(n_, r->content.ct.u);
    auto issues = check_receipt(ctx_, *r, n1, n);
    if (!issues.empty()) {
      std::string why = "receipt " + std::to_string(r->content.index) + " rejected";
      for (const auto& issue : issues) why += std::string("; ") + to_string(issue.kind) + ": " + issue.what;
      return reject(std::move(why));
    }
    auto height = commit(std::string(bytes), timestamp);
    n1_ = std::move(n1);
    n_ = std::move(n);
    last_index_ = r->content.index;
    heights_[last_index_] = height;
    return {true, {}, height};
  }

  AppendOutcome post_final_tally(std::string_view bytes, std::optional<std::int64_t> timestamp) {
    if (closed()) throw Error(Errc::protocol_order, "the final tally is already on the board");
    const G& g = ctx_.g;
    std::optional<FinalTally<G>> t;
    try {
      t = parse_final_tally(g, bytes);
    } catch (const Error& e) {
      return reject("unparseable final tally: " + std::string(e.what()));
    }
    if (!verify_receipt_tag(g, ctx_.receipt_key, as_bytes(final_tally_body(g, *t)), t->auth_tag)) {
      return reject("final tally authentication tag does not verify");
    }
    tally_height_ = commit(std::string(bytes), timestamp);
    return {true, {}, *tally_height_};
  }

  AppendOutcome reject(std::string reason) {
    rejections_.push_back(reason);
    return {false, std::move(reason), std::nullopt};
  }

  std::uint64_t commit(std::string payload, std::optional<std::int64_t> timestamp = std::nullopt) {
    Block b = chain_.next_block(std::move(payload), clock_);
    if (timestamp) b.timestamp = *timestamp;
    if (file_) append_durably(*file_, block_record(b), Errc::ledger);
    std::uint64_t height = b.height;
    chain_.push(std::move(b));
    return height;
  }

  ElectionContext<G> ctx_;
  std::optional<std::filesystem::path> file_;
  BlockClock clock_;
  Chain chain_;
  typename G::Element n_, n1_;
  std::uint64_t last_index_ = 0;
  std::map<std::uint64_t, std::uint64_t> heights_;
  std::optional<std::uint64_t> tally_height_;
  std::vector<std::string> rejections_;
};

}  // namespace dreip
