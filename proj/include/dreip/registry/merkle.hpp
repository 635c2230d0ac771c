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

#include <optional>
#include <vector>

#include "dreip/hash.hpp"
#include "dreip/random.hpp"

namespace dreip {

/// Sibling hashes from the leaf level upward. path_bits[k] is true when the
/// running node at level k is a right child.
struct MerklePath {
  std::size_t leaf_index = 0;
  std::vector<Digest> siblings;
  std::vector<bool> path_bits;

  friend bool operator==(const MerklePath&, const MerklePath&) = default;
};

inline Digest hash_node(const Digest& left, const Digest& right) { return hash_concat({left.bytes(), right.bytes()}); }

/// Binary hash tree over exactly 2^depth leaves, depth >= 1.
class MerkleTree {
 public:
  /// Pads `commitments` with hashes of random 32-byte strings up to the next
  /// power of two (at least two leaves) and builds every level.
  static MerkleTree build(std::vector<Digest> commitments, RandomSource& rng) {
    if (commitments.empty()) throw Error(Errc::invalid_input, "cannot build a tree without leaves");
    std::size_t width = 2;
    while (width < commitments.size()) width *= 2;
    while (commitments.size() < width) commitments.push_back(hash_bytes(rng.bytes(32)));
    return from_leaves(std::move(commitments));
  }

  /// Rebuilds a published tree; the leaf list must already be padded.
  static MerkleTree from_leaves(std::vector<Digest> leaves) {
    if (leaves.size() < 2 || (leaves.size() & (leaves.size() - 1)) != 0) {
      throw Error(Errc::invalid_input, "leaf count must be a power of two >= 2");
    }
    MerkleTree t;
    t.levels_.push_back(std::move(leaves));
    while (t.levels_.back().size() > 1) {
      const auto& below = t.levels_.back();
      std::vector<Digest> above(below.size() / 2);
      for (std::size_t i = 0; i < above.size(); ++i) above[i] = hash_node(below[2 * i], below[2 * i + 1]);
      t.levels_.push_back(std::move(above));
    }
    return t;
  }

  std::size_t depth() const { return levels_.size() - 1; }
  std::size_t leaf_count() const { return levels_.front().size(); }
  const Digest& root() const { return levels_.back().front(); }
  const std::vector<Digest>& leaves() const { return levels_.front(); }
  const std::vector<Digest>& level(std::size_t k) const { return levels_.at(k); }

  std::optional<std::size_t> find(const Digest& leaf) const {
    const auto& l = leaves();
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (l[i] == leaf) return i;
    }
    return std::nullopt;
  }

  MerklePath prove(std::size_t leaf_index) const {
    if (leaf_index >= leaf_count()) throw Error(Errc::invalid_input, "leaf index out of range");
    MerklePath path;
    path.leaf_index = leaf_index;
    std::size_t at = leaf_index;
    for (std::size_t k = 0; k < depth(); ++k) {
      path.siblings.push_back(levels_[k][at ^ 1]);
      path.path_bits.push_back((at & 1) != 0);
      at >>= 1;
    }
    return path;
  }

 private:
  std::vector<std::vector<Digest>> levels_;
};

inline MerkleTree build_tree(std::vector<Digest> commitments, RandomSource& rng) {
  return MerkleTree::build(std::move(commitments), rng);
}

inline MerklePath prove_membership(const MerkleTree& tree, std::size_t leaf_index) { return tree.prove(leaf_index); }

/// Folds `leaf` up through the path. The bits must also spell out
/// leaf_index, so an index/bit disagreement is rejected.
inline bool verify_membership(const Digest& root, const Digest& leaf, const MerklePath& path) {
  if (path.siblings.empty() || path.siblings.size() != path.path_bits.size() || path.siblings.size() >= 64) {
    return false;
  }
  if ((path.leaf_index >> path.siblings.size()) != 0) return false;
  Digest node = leaf;
  for (std::size_t k = 0; k < path.siblings.size(); ++k) {
    bool right = path.path_bits[k];
    if (right != (((path.leaf_index >> k) & 1) != 0)) return false;
    node = right ? hash_node(path.siblings[k], node) : hash_node(node, path.siblings[k]);
  }
  return node == root;
}

}  // namespace dreip
