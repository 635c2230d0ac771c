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

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>

#include "dreip/hash.hpp"

namespace dreip {

/// Per-election public value: the hash of the election id.
inline Digest external_nullifier_for(std::string_view election_id) { return hash_bytes(election_id); }

/// hash(external || hash(internal)); identical for repeat attempts by the
/// same voter in the same election.
inline Digest derive_nullifier_hash(const Digest& external_nullifier, ByteView internal_nullifier) {
  Digest inner = hash_bytes(internal_nullifier);
  return hash_concat({external_nullifier.bytes(), inner.bytes()});
}

enum class LedgerOutcome { accepted, double_vote };

/// Append-only set of seen hashes. With a backing file every accepted hash
/// is written and fsync'd before the call returns.
class NullifierLedger {
 public:
  explicit NullifierLedger(Digest external_nullifier, std::optional<std::filesystem::path> file = std::nullopt)
      : external_(external_nullifier), file_(std::move(file)) {
    if (file_ && std::filesystem::exists(*file_)) load();
    else if (file_) write_line("# dreip-ledger v1 external=" + external_.hex());
  }

  const Digest& external_nullifier() const { return external_; }
  std::size_t size() const { return seen_.size(); }
  bool contains(const Digest& h) const { return seen_.count(h) != 0; }

  LedgerOutcome check_and_record(const Digest& nullifier_hash) {
    if (contains(nullifier_hash)) return LedgerOutcome::double_vote;
    if (file_) write_line(nullifier_hash.hex());
    seen_.insert(nullifier_hash);
    return LedgerOutcome::accepted;
  }

 private:
  void load() {
    std::ifstream in(*file_);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line.rfind("# dreip-ledger v1 external=", 0) == 0) {
        if (line.substr(27) != external_.hex()) throw Error(Errc::ledger, "ledger belongs to another election");
        header = true;
        continue;
      }
      auto d = Digest::from_hex(line);
      if (!d) throw Error(Errc::ledger, "corrupt ledger line");
      seen_.insert(*d);
    }
    if (!header) throw Error(Errc::ledger, "ledger file missing header");
  }

  void write_line(const std::string& line) {
    std::FILE* f = std::fopen(file_->c_str(), "a");
    if (f == nullptr) throw Error(Errc::ledger, "cannot open ledger file " + file_->string());
    bool ok = std::fputs((line + "\n").c_str(), f) >= 0 && std::fflush(f) == 0 && ::fsync(fileno(f)) == 0;
    ok = (std::fclose(f) == 0) && ok;
    if (!ok) throw Error(Errc::ledger, "ledger write failed");
  }

  Digest external_;
  std::optional<std::filesystem::path> file_;
  std::set<Digest> seen_;
};

}  // namespace dreip
