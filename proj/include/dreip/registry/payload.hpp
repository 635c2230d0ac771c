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

#include <span>
#include <string>

#include "dreip/registry/merkle.hpp"
#include "dreip/registry/nullifier.hpp"
#include "dreip/registry/registry.hpp"

namespace dreip {

/// How membership is demonstrated to the polling verifier. Only the
/// transparent mode exists: it discloses the leaf and its path, so the
/// verifier learns which leaf is voting (not the voter id or nullifier).
enum class ProofMode { transparent_path };

/// What the voter app hands to the polling officer (the "QR payload").
struct ProofPayload {
  ProofMode mode = ProofMode::transparent_path;
  Digest root;
  Digest leaf;
  MerklePath path;
  Digest nullifier_hash;
  Digest external_nullifier;
};

inline std::string payload_text(const ProofPayload& p) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["mode"] = "transparent-path";
  j["root"] = p.root.hex();
  j["leaf"] = p.leaf.hex();
  nlohmann::ordered_json path;
  path["index"] = p.path.leaf_index;
  path["siblings"] = nlohmann::ordered_json::array();
  for (const auto& s : p.path.siblings) path["siblings"].push_back(s.hex());
  path["bits"] = nlohmann::ordered_json::array();
  for (bool b : p.path.path_bits) path["bits"].push_back(b ? 1 : 0);
  j["path"] = std::move(path);
  j["nullifier_hash"] = p.nullifier_hash.hex();
  j["external_nullifier"] = p.external_nullifier.hex();
  return j.dump();
}

inline ProofPayload parse_payload_text(std::string_view text) {
  try {
    auto j = nlohmann::ordered_json::parse(text);
    if (j.at("version").get<int>() != 1) throw Error(Errc::parse, "unsupported payload version");
    if (j.at("mode").get<std::string>() != "transparent-path") throw Error(Errc::parse, "unsupported proof mode");
    ProofPayload p;
    p.root = Digest::require_hex(j.at("root").get<std::string>());
    p.leaf = Digest::require_hex(j.at("leaf").get<std::string>());
    const auto& path = j.at("path");
    p.path.leaf_index = path.at("index").get<std::size_t>();
    for (const auto& s : path.at("siblings")) p.path.siblings.push_back(Digest::require_hex(s.get<std::string>()));
    for (const auto& b : path.at("bits")) {
      int bit = b.get<int>();
      if (bit != 0 && bit != 1) throw Error(Errc::parse, "path bit must be 0 or 1");
      p.path.path_bits.push_back(bit == 1);
    }
    p.nullifier_hash = Digest::require_hex(j.at("nullifier_hash").get<std::string>());
    p.external_nullifier = Digest::require_hex(j.at("external_nullifier").get<std::string>());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("proof payload: ") + e.what());
  }
}

/// base64url transport form, what a QR code would carry.
inline std::string encode_payload(const ProofPayload& p) { return base64url_encode(as_bytes(payload_text(p))); }

inline ProofPayload decode_payload(std::string_view transport) {
  auto raw = base64url_decode(transport);
  if (!raw) throw Error(Errc::parse, "proof payload is not base64url");
  return parse_payload_text(std::string(raw->begin(), raw->end()));
}

/// Voter-app side: recompute the commitment from the credential, locate it
/// among the published leaves, and assemble the payload.
inline ProofPayload make_proof_payload(const VoterCredential& cred, std::vector<Digest> published_leaves,
                                       std::string_view election_id) {
  MerkleTree tree = MerkleTree::from_leaves(std::move(published_leaves));
  Digest commitment = identity_commitment(cred);
  auto index = tree.find(commitment);
  if (!index) throw Error(Errc::not_eligible, "commitment not found in the published tree");
  ProofPayload p;
  p.root = tree.root();
  p.leaf = commitment;
  p.path = tree.prove(*index);
  p.external_nullifier = external_nullifier_for(election_id);
  p.nullifier_hash = derive_nullifier_hash(p.external_nullifier, cred.internal_nullifier);
  return p;
}

enum class PayloadCheck { ok, wrong_election, bad_membership };

/// Polling-officer side structural checks (nullifier freshness is the
/// ledger's job).
inline PayloadCheck check_payload(const ProofPayload& p, const Digest& root, const Digest& external_nullifier) {
  if (!(p.root == root) || !(p.external_nullifier == external_nullifier)) return PayloadCheck::wrong_election;
  if (!verify_membership(root, p.leaf, p.path)) return PayloadCheck::bad_membership;
  return PayloadCheck::ok;
}

}  // namespace dreip
