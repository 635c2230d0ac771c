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

#include <array>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dreip/registry/merkle.hpp"

namespace dreip {

/// Handed to the voter exactly once at registration; never stored by the
/// registry.
struct VoterCredential {
  std::string voter_id;
  std::array<std::uint8_t, 32> internal_nullifier{};
};

inline constexpr std::uint8_t kIdSeparator = 0x1f;

inline Digest identity_secret(std::string_view voter_id, ByteView internal_nullifier) {
  const std::uint8_t sep = kIdSeparator;
  return hash_concat({as_bytes(voter_id), ByteView(&sep, 1), internal_nullifier});
}

inline Digest identity_commitment(std::string_view voter_id, ByteView internal_nullifier) {
  return hash_bytes(identity_secret(voter_id, internal_nullifier).bytes());
}

inline Digest identity_commitment(const VoterCredential& cred) {
  return identity_commitment(cred.voter_id, cred.internal_nullifier);
}

struct Registration {
  VoterCredential credential;
  Digest commitment;
};

/// Commitment-phase registry. Holds the eligible roll and the list of
/// identity commitments; who registered is tracked only by a tagged hash of
/// the voter id, so the registry state never contains ids or nullifiers.
class VoterRegistry {
 public:
  explicit VoterRegistry(const std::vector<std::string>& roll) : roll_(roll.begin(), roll.end()) {}

  Registration register_voter(std::string_view voter_id, RandomSource& rng) {
    if (tree_) throw Error(Errc::registration_closed, "registry already sealed");
    if (roll_.count(std::string(voter_id)) == 0) throw Error(Errc::not_eligible, "voter not on the roll");
    Digest marker = registration_marker(voter_id);
    if (registered_.count(marker) != 0) throw Error(Errc::already_registered, "voter already registered");
    Registration out;
    out.credential.voter_id = std::string(voter_id);
    rng.fill(out.credential.internal_nullifier);
    out.commitment = identity_commitment(out.credential);
    commitments_.push_back(out.commitment);
    registered_.insert(marker);
    return out;
  }

  const std::vector<Digest>& commitments() const { return commitments_; }
  std::size_t registered_count() const { return commitments_.size(); }
  bool sealed() const { return tree_.has_value(); }

  /// Closes registration and builds the padded tree.
  const MerkleTree& seal(RandomSource& rng) {
    if (!tree_) tree_ = MerkleTree::build(commitments_, rng);
    return *tree_;
  }

  /// Installs a previously published tree (e.g. loaded from the registry file).
  void restore(MerkleTree tree) { tree_ = std::move(tree); }

  const MerkleTree& tree() const {
    if (!tree_) throw Error(Errc::protocol_order, "registry not sealed yet");
    return *tree_;
  }

 private:
  static Digest registration_marker(std::string_view voter_id) {
    return hash_concat({as_bytes("dreip/registered"), as_bytes(voter_id)});
  }

  std::set<std::string> roll_;
  std::vector<Digest> commitments_;
  std::set<Digest> registered_;
  std::optional<MerkleTree> tree_;
};

// Registry file: a small header followed by one lowercase-hex leaf per
// line, padding leaves included, in tree order.
//
//   # dreip-registry v1
//   # hash: sha256
//   # depth: 3
//   # leaves: 8
//   <64 hex chars>
//   ...
inline std::string write_registry_file(const MerkleTree& tree) {
  std::ostringstream out;
  out << "# dreip-registry v1\n# hash: sha256\n# depth: " << tree.depth() << "\n# leaves: " << tree.leaf_count()
      << "\n";
  for (const Digest& leaf : tree.leaves()) out << leaf.hex() << "\n";
  return out.str();
}

inline MerkleTree read_registry_file(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Digest> leaves;
  long depth = -1;
  bool saw_magic = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      if (line == "# dreip-registry v1") saw_magic = true;
      else if (line == "# hash: sha256") continue;
      else if (line.rfind("# depth: ", 0) == 0) depth = std::stol(line.substr(9));
      else if (line.rfind("# leaves: ", 0) != 0) throw Error(Errc::parse, "unknown registry header: " + line);
      continue;
    }
    auto d = Digest::from_hex(line);
    if (!d || line != d->hex()) throw Error(Errc::parse, "bad registry leaf line");
    leaves.push_back(*d);
  }
  if (!saw_magic) throw Error(Errc::parse, "missing registry header");
  MerkleTree tree = MerkleTree::from_leaves(std::move(leaves));
  if (depth != static_cast<long>(tree.depth())) throw Error(Errc::parse, "registry depth header mismatch");
  return tree;
}

}  // namespace dreip
