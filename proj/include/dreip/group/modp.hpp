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

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "dreip/bytes.hpp"
#include "dreip/group/tier.hpp"
#include "dreip/hash.hpp"
#include "dreip/scalar.hpp"

namespace dreip {

struct ModpElement {
  mpz_class value;

  friend bool operator==(const ModpElement& a, const ModpElement& b) { return a.value == b.value; }
};

/// Order-q subgroup of Z_p^* for a safe prime p = 2q + 1, i.e. the
/// quadratic residues mod p. The test tier uses p = 2039, small enough that
/// tests can enumerate every element.
class ModpGroup {
 public:
  using Element = ModpElement;
  static constexpr SecurityTier kTier = SecurityTier::test;
  static constexpr unsigned long kTestModulus = 2039;

  static ModpGroup derive(ByteView seed) { return derive(mpz_class(kTestModulus), seed); }

  /// Generators come from hashing the seed into the group, so nobody knows
  /// log_g1(g2). Throws invalid_parameters if p is not a safe prime.
  static ModpGroup derive(const mpz_class& p, ByteView seed) {
    if (p < 7 || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0) {
      throw Error(Errc::invalid_parameters, "modulus is not prime");
    }
    mpz_class q = (p - 1) / 2;
    if (mpz_probab_prime_p(q.get_mpz_t(), 40) == 0) {
      throw Error(Errc::invalid_parameters, "modulus is not a safe prime");
    }
    ModpGroup g;
    g.p_ = p;
    g.field_ = ScalarField(q);
    g.width_ = byte_width(p);
    g.seed_.assign(seed.begin(), seed.end());
    g.g1_ = g.hash_to_group("g1");
    g.g2_ = g.hash_to_group("g2");
    if (g.g1_ == g.g2_) throw Error(Errc::invalid_parameters, "generators coincide");
    for (const auto* gen : {&g.g1_, &g.g2_}) {
      if (!g.has_exact_order(gen->value)) throw Error(Errc::invalid_parameters, "generator order check failed");
    }
    return g;
  }

  static ModpGroup from_description(const nlohmann::ordered_json& desc) {
    if (desc.at("tier").get<std::string>() != "test") throw Error(Errc::invalid_parameters, "not a test-tier group");
    mpz_class p(desc.at("p").get<std::string>(), 10);
    ModpGroup g = derive(p, require_hex(desc.at("seed").get<std::string>()));
    if (desc.at("g1") != dreip::to_hex(g.encode(g.g1_)) || desc.at("g2") != dreip::to_hex(g.encode(g.g2_))) {
      throw Error(Errc::invalid_parameters, "generators do not match seed");
    }
    return g;
  }

  nlohmann::ordered_json describe() const {
    nlohmann::ordered_json d;
    d["tier"] = "test";
    d["p"] = p_.get_str(10);
    d["q"] = field_.order().get_str(10);
    d["seed"] = dreip::to_hex(seed_);
    d["g1"] = dreip::to_hex(encode(g1_));
    d["g2"] = dreip::to_hex(encode(g2_));
    return d;
  }

  const mpz_class& modulus() const { return p_; }
  const ScalarField& field() const { return field_; }
  const Bytes& seed() const { return seed_; }
  std::size_t element_size() const { return width_; }

  Element identity() const { return {mpz_class(1)}; }
  const Element& g1() const { return g1_; }
  const Element& g2() const { return g2_; }

  Element mul(const Element& a, const Element& b) const {
    mpz_class r = a.value * b.value;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
    return {std::move(r)};
  }

  Element inverse(const Element& a) const {
    mpz_class r;
    mpz_invert(r.get_mpz_t(), a.value.get_mpz_t(), p_.get_mpz_t());
    return {std::move(r)};
  }

  Element exp(const Element& base, const Scalar& k) const {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.value.get_mpz_t(), k.value().get_mpz_t(), p_.get_mpz_t());
    return {std::move(r)};
  }

  Bytes encode(const Element& a) const { return encode_integer(a.value, width_); }

  /// Rejects anything outside the order-q subgroup (for a safe prime: the
  /// non-residues, 0, and values >= p).
  std::optional<Element> decode(ByteView data) const {
    if (data.size() != width_) return std::nullopt;
    mpz_class v = decode_integer(data);
    if (!is_member(v)) return std::nullopt;
    return Element{std::move(v)};
  }

  bool is_member(const mpz_class& v) const {
    if (v <= 0 || v >= p_) return false;
    mpz_class r;
    mpz_powm(r.get_mpz_t(), v.get_mpz_t(), field_.order().get_mpz_t(), p_.get_mpz_t());
    return r == 1;
  }

 private:
  bool has_exact_order(const mpz_class& v) const { return v != 1 && is_member(v); }

  Element hash_to_group(std::string_view label) const {
    for (std::uint32_t counter = 0;; ++counter) {
      Bytes ctr;
      append_u32_be(ctr, counter);
      Digest d = hash_concat({as_bytes("dreip/generator"), seed_, as_bytes(label), ctr});
      mpz_class x = decode_integer(d.bytes());
      mpz_mod(x.get_mpz_t(), x.get_mpz_t(), p_.get_mpz_t());
      mpz_class sq = x * x;
      mpz_mod(sq.get_mpz_t(), sq.get_mpz_t(), p_.get_mpz_t());
      if (sq > 1) return {std::move(sq)};
    }
  }

  mpz_class p_;
  ScalarField field_;
  std::size_t width_ = 0;
  Bytes seed_;
  Element g1_;
  Element g2_;
};

}  // namespace dreip
