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

#include "dreip/board/chain.hpp"
#include "dreip/dre/receipt.hpp"

namespace dreip {

// Adversarial edits of a stored board. The adversary has write access to
// the board, so after an edit it re-hashes every later block to keep the
// chain internally consistent; detection has to come from the proofs and
// tally equations.

/// Replaces the payload at `height` and re-links every block after it.
inline Chain replace_payload(const Chain& chain, std::size_t height, std::string payload) {
  std::vector<Block> blocks = chain.blocks();
  blocks.at(height).payload = std::move(payload);
  for (std::size_t h = height; h < blocks.size(); ++h) {
    if (h > 0) blocks[h].prev_hash = blocks[h - 1].header_hash();
    blocks[h].payload_hash = hash_bytes(blocks[h].payload);
  }
  return Chain(std::move(blocks));
}

struct Mutation {
  std::string field;
  std::string payload;
};

namespace tamper {

using Json = nlohmann::ordered_json;

template <PrimeOrderGroup G>
std::string bump_element(const G& g, const std::string& hex) {
  return element_hex(g, g.mul(require_element_hex(g, hex), g.g1()));
}

template <PrimeOrderGroup G>
std::string bump_scalar(const G& g, const std::string& hex) {
  const ScalarField& f = g.field();
  return f.to_hex(f.add(f.require_hex(hex), f.one()));
}

/// One mutation per component of a serialized Schnorr proof.
template <PrimeOrderGroup G>
std::vector<std::pair<std::string, std::string>> dlog_variants(const G& g, const std::string& hex) {
  auto p = *parse_dlog_proof(g, require_hex(hex));
  const ScalarField& f = g.field();
  std::vector<std::pair<std::string, std::string>> out;
  auto a = p;
  a.commitment = g.mul(a.commitment, g.g1());
  out.emplace_back("A", to_hex(serialize(g, a)));
  auto e = p;
  e.challenge = f.add(e.challenge, f.one());
  out.emplace_back("e", to_hex(serialize(g, e)));
  auto z = p;
  z.response = f.add(z.response, f.one());
  out.emplace_back("z", to_hex(serialize(g, z)));
  return out;
}

template <PrimeOrderGroup G>
std::vector<std::pair<std::string, std::string>> wellformed_variants(const G& g, const std::string& hex) {
  auto p = *parse_wellformed_proof(g, require_hex(hex));
  const ScalarField& f = g.field();
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t j = 0; j < p.branches.size(); ++j) {
    std::string prefix = "[" + std::to_string(j + 1) + "].";
    auto emit = [&](const std::string& name, auto&& edit) {
      auto q = p;
      edit(q.branches[j]);
      out.emplace_back(prefix + name, to_hex(serialize(g, q)));
    };
    emit("A_U", [&](auto& b) { b.a_u = g.mul(b.a_u, g.g1()); });
    emit("A_V", [&](auto& b) { b.a_v = g.mul(b.a_v, g.g1()); });
    emit("A_E", [&](auto& b) { b.a_e = g.mul(b.a_e, g.g1()); });
    emit("A_W", [&](auto& b) { b.a_w = g.mul(b.a_w, g.g1()); });
    emit("e", [&](auto& b) { b.challenge = f.add(b.challenge, f.one()); });
    emit("z", [&](auto& b) { b.response = f.add(b.response, f.one()); });
  }
  return out;
}

}  // namespace tamper

/// Every single-field mutation of a merged receipt, each still a
/// syntactically valid document: group elements are multiplied by g1,
/// scalars incremented, proofs edited one component at a time, the
/// revealed v swapped for each other allowed encoding and the decision
/// marker flipped.
template <PrimeOrderGroup G>
std::vector<Mutation> receipt_mutations(const G& g, std::string_view wire, std::span<const Scalar> encodings) {
  using tamper::Json;
  const Json original = Json::parse(wire);
  std::vector<Mutation> out;
  auto emit = [&](std::string field, const Json& doc) { out.push_back({std::move(field), doc.dump()}); };
  auto with = [&](const char* key, Json value) {
    Json doc = original;
    doc[key] = std::move(value);
    return doc;
  };
  emit("index", with("index", original["index"].get<std::uint64_t>() + 1));
  for (const char* key : {"U", "V", "E", "W"}) emit(key, with(key, tamper::bump_element(g, original[key])));
  emit("alpha", with("alpha", tamper::bump_scalar(g, original["alpha"])));
  for (auto& [name, hex] : tamper::wellformed_variants(g, original["pwf"])) emit("pwf" + name, with("pwf", hex));
  for (auto& [name, hex] : tamper::dlog_variants(g, original["pk_s1"])) emit("pk_s1." + name, with("pk_s1", hex));
  if (original["decision"] == "audited") {
    emit("r", with("r", tamper::bump_scalar(g, original["r"])));
    emit("v", with("v", tamper::bump_scalar(g, original["v"])));
    Scalar v = g.field().require_hex(original["v"].get<std::string>());
    for (std::size_t j = 0; j < encodings.size(); ++j) {
      if (!(encodings[j] == v)) emit("v=enc" + std::to_string(j + 1), with("v", g.field().to_hex(encodings[j])));
    }
    emit("decision", with("decision", "confirmed"));
  } else {
    for (auto& [name, hex] : tamper::dlog_variants(g, original["pk_s"])) emit("pk_s." + name, with("pk_s", hex));
    emit("decision", with("decision", "audited"));
  }
  for (auto& [name, hex] : tamper::dlog_variants(g, original["auth_tag"])) emit("auth_tag." + name, with("auth_tag", hex));
  return out;
}

/// Single-field mutations of the final tally: t, s, m and the tag.
template <PrimeOrderGroup G>
std::vector<Mutation> tally_mutations(const G& g, std::string_view wire) {
  using tamper::Json;
  const Json original = Json::parse(wire);
  std::vector<Mutation> out;
  for (const char* key : {"t", "s", "m"}) {
    Json doc = original;
    doc[key] = tamper::bump_scalar(g, original[key]);
    out.push_back({key, doc.dump()});
  }
  for (auto& [name, hex] : tamper::dlog_variants(g, original["auth_tag"])) {
    Json doc = original;
    doc["auth_tag"] = hex;
    out.push_back({"auth_tag." + name, doc.dump()});
  }
  return out;
}

}  // namespace dreip
