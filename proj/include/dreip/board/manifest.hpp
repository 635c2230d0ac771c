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

#include <string>
#include <vector>

#include "dreip/dre/machine.hpp"

namespace dreip {

/// Election parameters carried by the genesis block.
struct ElectionManifest {
  std::string election_id;
  nlohmann::ordered_json group;
  std::vector<std::string> candidates;
  std::uint64_t voter_bound = 0;
  nlohmann::ordered_json public_key;
  std::string receipt_key;

  SecurityTier tier() const { return parse_tier(group.at("tier").get<std::string>()); }
  VoteEncoding encoding() const { return {candidates.size(), voter_bound}; }
};

inline std::string genesis_payload(const ElectionManifest& m) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["kind"] = "genesis";
  j["election_id"] = m.election_id;
  j["group"] = m.group;
  j["candidates"] = m.candidates;
  j["voter_bound"] = m.voter_bound;
  j["public_key"] = m.public_key;
  j["receipt_key"] = m.receipt_key;
  return j.dump();
}

inline ElectionManifest parse_genesis(std::string_view payload) {
  try {
    auto j = nlohmann::ordered_json::parse(payload);
    if (j.at("version") != 1 || j.at("kind") != "genesis") throw Error(Errc::parse, "not a genesis block");
    ElectionManifest m;
    m.election_id = j.at("election_id").get<std::string>();
    m.group = j.at("group");
    m.candidates = j.at("candidates").get<std::vector<std::string>>();
    m.voter_bound = j.at("voter_bound").get<std::uint64_t>();
    m.public_key = j.at("public_key");
    m.receipt_key = j.at("receipt_key").get<std::string>();
    if (genesis_payload(m) != payload) throw Error(Errc::parse, "genesis block is not canonical");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("bad genesis block: ") + e.what());
  }
}

/// The typed public parameters every checker needs.
template <PrimeOrderGroup G>
struct ElectionContext {
  ElectionManifest manifest;
  G g;
  DrePublicKey<G> pk;
  typename G::Element receipt_key;
  VoteEncoding encoding;
  std::vector<Scalar> encodings;

  static ElectionContext from_manifest(ElectionManifest m) {
    if (m.tier() != G::kTier) throw Error(Errc::wrong_variant, "manifest is for another security tier");
    G g = G::from_description(m.group);
    auto pk = parse_public_key(g, m.public_key);
    auto key = require_element_hex(g, m.receipt_key);
    VoteEncoding enc = m.encoding();
    enc.validate(g.field());
    auto encodings = enc.encodings(g.field());
    return {std::move(m), std::move(g), std::move(pk), std::move(key), enc, std::move(encodings)};
  }

  static ElectionContext create(std::string election_id, const G& g, const DrePublicKey<G>& pk,
                                const typename G::Element& receipt_key, std::vector<std::string> candidates,
                                std::uint64_t voter_bound) {
    ElectionManifest m;
    m.election_id = std::move(election_id);
    m.group = g.describe();
    m.candidates = std::move(candidates);
    m.voter_bound = voter_bound;
    m.public_key = public_key_json(g, pk);
    m.receipt_key = element_hex(g, receipt_key);
    return from_manifest(std::move(m));
  }
};

/// Kind of a board payload: "genesis", "receipt" or "final-tally".
inline std::string payload_kind(std::string_view payload) {
  try {
    auto j = nlohmann::json::parse(payload);
    if (j.is_object() && j.contains("kind") && j["kind"].is_string()) return j["kind"].get<std::string>();
    return "receipt";
  } catch (const nlohmann::json::exception&) {
    return "receipt";
  }
}

}  // namespace dreip
