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
#include <variant>

#include "dreip/dre/public_key.hpp"
#include "dreip/nizk/dlog.hpp"
#include "dreip/nizk/wellformed.hpp"

namespace dreip {

/// alpha = H(U, V, E) under the "alpha" domain tag.
template <PrimeOrderGroup G>
Scalar compute_alpha(const G& g, const Ciphertext<G>& ct) {
  Transcript t("alpha");
  t.absorb_element(g, ct.u).absorb_element(g, ct.v).absorb_element(g, ct.e);
  return t.challenge(g.field());
}

/// Context for P_K{s1 : n1 = g1^s1} attached to ballot `index`.
inline Transcript pk_s1_context(std::uint64_t index) {
  Transcript t("pk-s1");
  t.absorb_u64(index);
  return t;
}

/// Context for P_K{s : n = g1^s} attached to confirmed ballot `index`.
inline Transcript pk_s_context(std::uint64_t index) {
  Transcript t("pk-s");
  t.absorb_u64(index);
  return t;
}

/// Everything in the first half of a receipt except its tag.
template <PrimeOrderGroup G>
struct BallotContent {
  std::uint64_t index = 0;
  Ciphertext<G> ct;
  Scalar alpha;
  WellFormedProof<G> pwf;
  DlogProof<G> pk_s1;
};

template <PrimeOrderGroup G>
struct BallotFirstPart {
  BallotContent<G> content;
  Bytes auth_tag;
};

struct AuditedOpening {
  Scalar r;
  Scalar v;
};

template <PrimeOrderGroup G>
struct ConfirmedProof {
  DlogProof<G> pk_s;
};

template <PrimeOrderGroup G>
using SecondPartBody = std::variant<AuditedOpening, ConfirmedProof<G>>;

template <PrimeOrderGroup G>
struct ReceiptSecondPart {
  std::uint64_t index = 0;
  SecondPartBody<G> body;
  Bytes auth_tag;

  bool audited() const { return std::holds_alternative<AuditedOpening>(body); }
};

/// The merged single-part receipt that goes on the bulletin board.
template <PrimeOrderGroup G>
struct Receipt {
  BallotContent<G> content;
  SecondPartBody<G> body;
  Bytes auth_tag;

  bool audited() const { return std::holds_alternative<AuditedOpening>(body); }
};

template <PrimeOrderGroup G>
struct FinalTally {
  Scalar t;
  Scalar s;
  Scalar m;
  Bytes auth_tag;
};

// Wire format. Each document is compact JSON with a fixed key order and
// lowercase-hex values; the authentication tag signs the document with the
// "auth_tag" key removed. Proofs are hex of their binary layout.
//
//   first part : version, part="first", index, U, V, E, W, alpha, pwf, pk_s1, auth_tag
//   second part: version, part="second", index, decision, (r, v) | pk_s, auth_tag
//   receipt    : version, index, U, V, E, W, alpha, pwf, pk_s1, decision, (r, v) | pk_s, auth_tag
//   final tally: version, kind="final-tally", t, s, m, auth_tag

namespace wire {

using Json = nlohmann::ordered_json;

template <PrimeOrderGroup G>
void put_content(Json& j, const G& g, const BallotContent<G>& c) {
  j["index"] = c.index;
  j["U"] = element_hex(g, c.ct.u);
  j["V"] = element_hex(g, c.ct.v);
  j["E"] = element_hex(g, c.ct.e);
  j["W"] = element_hex(g, c.ct.w);
  j["alpha"] = g.field().to_hex(c.alpha);
  j["pwf"] = to_hex(serialize(g, c.pwf));
  j["pk_s1"] = to_hex(serialize(g, c.pk_s1));
}

template <PrimeOrderGroup G>
void put_body(Json& j, const G& g, const SecondPartBody<G>& body) {
  if (const auto* a = std::get_if<AuditedOpening>(&body)) {
    j["decision"] = "audited";
    j["r"] = g.field().to_hex(a->r);
    j["v"] = g.field().to_hex(a->v);
  } else {
    j["decision"] = "confirmed";
    j["pk_s"] = to_hex(serialize(g, std::get<ConfirmedProof<G>>(body).pk_s));
  }
}

inline const Json& at(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(Errc::parse, std::string("missing field ") + key);
  return *it;
}

inline std::string text(const Json& j, const char* key) {
  const Json& v = at(j, key);
  if (!v.is_string()) throw Error(Errc::parse, std::string("field ") + key + " must be a string");
  return v.get<std::string>();
}

template <PrimeOrderGroup G>
typename G::Element element(const G& g, const Json& j, const char* key) {
  return require_element_hex(g, text(j, key));
}

template <PrimeOrderGroup G>
Scalar scalar(const G& g, const Json& j, const char* key) {
  return g.field().require_hex(text(j, key));
}

template <PrimeOrderGroup G>
DlogProof<G> dlog(const G& g, const Json& j, const char* key) {
  auto p = parse_dlog_proof(g, require_hex(text(j, key)));
  if (!p) throw Error(Errc::parse, std::string("malformed proof in ") + key);
  return *p;
}

template <PrimeOrderGroup G>
BallotContent<G> get_content(const G& g, const Json& j) {
  BallotContent<G> c;
  const Json& index = at(j, "index");
  if (!index.is_number_unsigned()) throw Error(Errc::parse, "index must be an unsigned integer");
  c.index = index.get<std::uint64_t>();
  c.ct = {element(g, j, "U"), element(g, j, "V"), element(g, j, "E"), element(g, j, "W")};
  c.alpha = scalar(g, j, "alpha");
  auto pwf = parse_wellformed_proof(g, require_hex(text(j, "pwf")));
  if (!pwf) throw Error(Errc::parse, "malformed well-formedness proof");
  c.pwf = std::move(*pwf);
  c.pk_s1 = dlog(g, j, "pk_s1");
  return c;
}

template <PrimeOrderGroup G>
SecondPartBody<G> get_body(const G& g, const Json& j) {
  std::string decision = text(j, "decision");
  if (decision == "audited") return AuditedOpening{scalar(g, j, "r"), scalar(g, j, "v")};
  if (decision == "confirmed") return ConfirmedProof<G>{dlog(g, j, "pk_s")};
  throw Error(Errc::parse, "unknown decision '" + decision + "'");
}

inline Json parse_document(std::string_view bytes) {
  try {
    Json j = Json::parse(bytes);
    if (!j.is_object()) throw Error(Errc::parse, "document is not an object");
    if (at(j, "version") != 1) throw Error(Errc::parse, "unsupported version");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, e.what());
  }
}

inline Json with_version() {
  Json j;
  j["version"] = 1;
  return j;
}

}  // namespace wire

template <PrimeOrderGroup G>
std::string first_part_body(const G& g, const BallotContent<G>& c) {
  auto j = wire::with_version();
  j["part"] = "first";
  wire::put_content(j, g, c);
  return j.dump();
}

template <PrimeOrderGroup G>
std::string second_part_body(const G& g, std::uint64_t index, const SecondPartBody<G>& body) {
  auto j = wire::with_version();
  j["part"] = "second";
  j["index"] = index;
  wire::put_body(j, g, body);
  return j.dump();
}

template <PrimeOrderGroup G>
std::string receipt_body(const G& g, const BallotContent<G>& c, const SecondPartBody<G>& body) {
  auto j = wire::with_version();
  wire::put_content(j, g, c);
  wire::put_body(j, g, body);
  return j.dump();
}

template <PrimeOrderGroup G>
std::string final_tally_body(const G& g, const FinalTally<G>& tally) {
  auto j = wire::with_version();
  j["kind"] = "final-tally";
  j["t"] = g.field().to_hex(tally.t);
  j["s"] = g.field().to_hex(tally.s);
  j["m"] = g.field().to_hex(tally.m);
  return j.dump();
}

namespace wire {

/// Re-attaches the tag as the final key of a signed body.
inline std::string with_tag(const std::string& body, ByteView tag) {
  Json j = Json::parse(body);
  j["auth_tag"] = to_hex(tag);
  return j.dump();
}

/// Splits a signed document into (parsed json, body bytes, tag), insisting
/// that the bytes are in canonical form.
inline std::tuple<Json, std::string, Bytes> split_signed(std::string_view bytes) {
  Json j = parse_document(bytes);
  Bytes tag = require_hex(text(j, "auth_tag"));
  if (j.back() != j["auth_tag"]) throw Error(Errc::parse, "auth_tag must be the last field");
  j.erase("auth_tag");
  std::string body = j.dump();
  if (with_tag(body, tag) != bytes) throw Error(Errc::parse, "document is not in canonical form");
  return {std::move(j), std::move(body), std::move(tag)};
}

}  // namespace wire

template <PrimeOrderGroup G>
std::string to_wire(const G& g, const BallotFirstPart<G>& p) {
  return wire::with_tag(first_part_body(g, p.content), p.auth_tag);
}

template <PrimeOrderGroup G>
std::string to_wire(const G& g, const ReceiptSecondPart<G>& p) {
  return wire::with_tag(second_part_body(g, p.index, p.body), p.auth_tag);
}

template <PrimeOrderGroup G>
std::string to_wire(const G& g, const Receipt<G>& r) {
  return wire::with_tag(receipt_body(g, r.content, r.body), r.auth_tag);
}

template <PrimeOrderGroup G>
std::string to_wire(const G& g, const FinalTally<G>& t) {
  return wire::with_tag(final_tally_body(g, t), t.auth_tag);
}

/// Throws Error(parse) on anything that is not a canonical receipt.
template <PrimeOrderGroup G>
Receipt<G> parse_receipt(const G& g, std::string_view bytes) {
  auto [j, body, tag] = wire::split_signed(bytes);
  if (j.contains("part")) throw Error(Errc::parse, "expected a merged receipt");
  Receipt<G> r{wire::get_content(g, j), wire::get_body(g, j), std::move(tag)};
  if (receipt_body(g, r.content, r.body) != body) throw Error(Errc::parse, "receipt has unexpected fields");
  return r;
}

template <PrimeOrderGroup G>
BallotFirstPart<G> parse_first_part(const G& g, std::string_view bytes) {
  auto [j, body, tag] = wire::split_signed(bytes);
  if (wire::text(j, "part") != "first") throw Error(Errc::parse, "expected a first-part receipt");
  BallotFirstPart<G> p{wire::get_content(g, j), std::move(tag)};
  if (first_part_body(g, p.content) != body) throw Error(Errc::parse, "first part has unexpected fields");
  return p;
}

template <PrimeOrderGroup G>
ReceiptSecondPart<G> parse_second_part(const G& g, std::string_view bytes) {
  auto [j, body, tag] = wire::split_signed(bytes);
  if (wire::text(j, "part") != "second") throw Error(Errc::parse, "expected a second-part receipt");
  const auto& index = wire::at(j, "index");
  if (!index.is_number_unsigned()) throw Error(Errc::parse, "index must be an unsigned integer");
  ReceiptSecondPart<G> p{index.get<std::uint64_t>(), wire::get_body(g, j), std::move(tag)};
  if (second_part_body(g, p.index, p.body) != body) throw Error(Errc::parse, "second part has unexpected fields");
  return p;
}

template <PrimeOrderGroup G>
FinalTally<G> parse_final_tally(const G& g, std::string_view bytes) {
  auto [j, body, tag] = wire::split_signed(bytes);
  if (wire::text(j, "kind") != "final-tally") throw Error(Errc::parse, "expected a final tally");
  FinalTally<G> t{wire::scalar(g, j, "t"), wire::scalar(g, j, "s"), wire::scalar(g, j, "m"), std::move(tag)};
  if (final_tally_body(g, t) != body) throw Error(Errc::parse, "final tally has unexpected fields");
  return t;
}

}  // namespace dreip
