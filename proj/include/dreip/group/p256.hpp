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

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/err.h>
#include <openssl/obj_mac.h>
#include <nlohmann/json.hpp>

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dreip/bytes.hpp"
#include "dreip/group/tier.hpp"
#include "dreip/hash.hpp"
#include "dreip/scalar.hpp"

namespace dreip {

namespace detail {

struct BnFree {
  void operator()(BIGNUM* b) const { BN_clear_free(b); }
};
struct BnCtxFree {
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};
struct PointFree {
  void operator()(EC_POINT* p) const { EC_POINT_clear_free(p); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnFree>;

inline const EC_GROUP* p256_curve() {
  static const EC_GROUP* curve = [] {
    EC_GROUP* g = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
    if (g == nullptr) throw Error(Errc::invalid_parameters, "P-256 unavailable in libcrypto");
    return g;
  }();
  return curve;
}

inline BN_CTX* bn_ctx() {
  thread_local std::unique_ptr<BN_CTX, BnCtxFree> ctx(BN_CTX_new());
  return ctx.get();
}

inline BnPtr to_bignum(const mpz_class& v) {
  Bytes raw = encode_integer(v, byte_width(v) == 0 ? 1 : byte_width(v));
  return BnPtr(BN_bin2bn(raw.data(), static_cast<int>(raw.size()), nullptr));
}

inline mpz_class from_bignum(const BIGNUM* b) {
  Bytes raw(static_cast<std::size_t>(BN_num_bytes(b)));
  BN_bn2bin(b, raw.data());
  return decode_integer(raw);
}

struct GroupFree {
  void operator()(EC_GROUP* g) const { EC_GROUP_free(g); }
};
using FixedTable = std::shared_ptr<const EC_GROUP>;

// Building a table costs tens of milliseconds, so tables are shared
// process-wide and keyed by the encoded base.
inline FixedTable fixed_base_table(const EC_POINT* base, const Bytes& key) {
  static std::mutex mu;
  static std::map<Bytes, FixedTable> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::unique_ptr<EC_GROUP, GroupFree> g(EC_GROUP_dup(p256_curve()));
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wdeprecated-declarations"
  if (!g || EC_GROUP_set_generator(g.get(), base, EC_GROUP_get0_order(p256_curve()), BN_value_one()) != 1 ||
      EC_GROUP_precompute_mult(g.get(), bn_ctx()) != 1) {
    ERR_clear_error();
    return nullptr;
  }
#pragma GCC diagnostic pop
  FixedTable t(g.release(), GroupFree{});
  cache.emplace(key, t);
  return t;
}

}  // namespace detail

/// Value-semantic handle to a P-256 point; default-constructed is the
/// point at infinity. The compressed encoding is cached after the first
/// encode or decode, so a point must not be encoded for the first time from
/// two threads at once.
class EcPoint {
 public:
  EcPoint() : p_(EC_POINT_new(detail::p256_curve())) { EC_POINT_set_to_infinity(detail::p256_curve(), p_.get()); }
  EcPoint(const EcPoint& other)
      : p_(EC_POINT_dup(other.p_.get(), detail::p256_curve())), enc_(other.enc_), enc_valid_(other.enc_valid_) {}
  EcPoint& operator=(const EcPoint& other) {
    if (this != &other) {
      EC_POINT_copy(p_.get(), other.p_.get());
      enc_ = other.enc_;
      enc_valid_ = other.enc_valid_;
    }
    return *this;
  }
  EcPoint(EcPoint&&) noexcept = default;
  EcPoint& operator=(EcPoint&&) noexcept = default;

  const EC_POINT* get() const { return p_.get(); }
  EC_POINT* get() {
    enc_valid_ = false;
    return p_.get();
  }

  friend bool operator==(const EcPoint& a, const EcPoint& b) {
    if (a.enc_valid_ && b.enc_valid_) return a.enc_ == b.enc_;
    return EC_POINT_cmp(detail::p256_curve(), a.get(), b.get(), detail::bn_ctx()) == 0;
  }

 private:
  friend class P256Group;

  std::unique_ptr<EC_POINT, detail::PointFree> p_;
  mutable std::array<std::uint8_t, 33> enc_{};
  mutable bool enc_valid_ = false;
};

/// NIST P-256 through libcrypto: a 256-bit prime-order group with cofactor
/// one. Elements encode as 33-byte SEC1 compressed points; the identity is
/// 33 zero bytes so every encoding has the same width.
class P256Group {
 public:
  using Element = EcPoint;
  static constexpr SecurityTier kTier = SecurityTier::standard;
  static constexpr std::size_t kElementSize = 33;

  static P256Group derive(ByteView seed) {
    P256Group g;
    detail::BnPtr order(BN_new());
    EC_GROUP_get_order(detail::p256_curve(), order.get(), detail::bn_ctx());
    g.field_ = ScalarField(detail::from_bignum(order.get()));
    if (mpz_probab_prime_p(g.field_.order().get_mpz_t(), 40) == 0) {
      throw Error(Errc::invalid_parameters, "curve order is not prime");
    }
    g.seed_.assign(seed.begin(), seed.end());
    g.g1_ = g.hash_to_group("g1");
    g.g2_ = g.hash_to_group("g2");
    if (g.g1_ == g.g2_) throw Error(Errc::invalid_parameters, "generators coincide");
    for (const auto* gen : {&g.g1_, &g.g2_}) {
      if (*gen == g.identity() || !(g.exp(*gen, Scalar(g.field_.order())) == g.identity())) {
        throw Error(Errc::invalid_parameters, "generator order check failed");
      }
    }
    g.description_ = std::make_shared<nlohmann::ordered_json>();
    auto& d = *g.description_;
    d["tier"] = "standard";
    d["curve"] = "P-256";
    d["q"] = g.field_.order().get_str(10);
    d["seed"] = dreip::to_hex(g.seed_);
    d["g1"] = dreip::to_hex(g.encode(g.g1_));
    d["g2"] = dreip::to_hex(g.encode(g.g2_));
    g.precompute(g.g1_);
    g.precompute(g.g2_);
    return g;
  }

  static P256Group from_description(const nlohmann::ordered_json& desc) {
    if (desc.at("tier").get<std::string>() != "standard" || desc.at("curve").get<std::string>() != "P-256") {
      throw Error(Errc::invalid_parameters, "not a standard-tier P-256 group");
    }
    P256Group g = derive(require_hex(desc.at("seed").get<std::string>()));
    if (desc.at("g1") != dreip::to_hex(g.encode(g.g1_)) || desc.at("g2") != dreip::to_hex(g.encode(g.g2_))) {
      throw Error(Errc::invalid_parameters, "generators do not match seed");
    }
    return g;
  }

  const nlohmann::ordered_json& describe() const { return *description_; }

  /// Registers a base that will be raised to many exponents. Later exp()
  /// calls on an equal point use a precomputed table; copies of this group
  /// share the registration.
  void precompute(const Element& base) const {
    if (EC_POINT_is_at_infinity(detail::p256_curve(), base.get())) return;
    for (const auto& f : *fixed_) {
      if (f.base == base) return;
    }
    if (auto table = detail::fixed_base_table(base.get(), encode(base))) fixed_->push_back({base, table});
  }

  const ScalarField& field() const { return field_; }
  const Bytes& seed() const { return seed_; }
  std::size_t element_size() const { return kElementSize; }

  Element identity() const { return {}; }
  const Element& g1() const { return g1_; }
  const Element& g2() const { return g2_; }

  Element mul(const Element& a, const Element& b) const {
    Element r;
    EC_POINT_add(detail::p256_curve(), r.get(), a.get(), b.get(), detail::bn_ctx());
    return r;
  }

  Element inverse(const Element& a) const {
    Element r(a);
    EC_POINT_invert(detail::p256_curve(), r.get(), detail::bn_ctx());
    return r;
  }

  Element exp(const Element& base, const Scalar& k) const {
    Element r;
    auto bn = detail::to_bignum(k.value());
    for (const auto& f : *fixed_) {
      if (f.base == base) {
        EC_POINT_mul(f.table.get(), r.get(), bn.get(), nullptr, nullptr, detail::bn_ctx());
        return r;
      }
    }
    EC_POINT_mul(detail::p256_curve(), r.get(), nullptr, base.get(), bn.get(), detail::bn_ctx());
    return r;
  }

  /// a^x * b^y, using a fixed-base table for either base when one exists.
  Element exp2(const Element& a, const Scalar& x, const Element& b, const Scalar& y) const {
    for (const auto& f : *fixed_) {
      const bool first = f.base == a;
      if (first || f.base == b) {
        auto k_fixed = detail::to_bignum((first ? x : y).value());
        auto k_var = detail::to_bignum((first ? y : x).value());
        Element r;
        EC_POINT_mul(f.table.get(), r.get(), k_fixed.get(), (first ? b : a).get(), k_var.get(), detail::bn_ctx());
        return r;
      }
    }
    const std::array<const Element*, 2> bases{&a, &b};
    const std::array<Scalar, 2> exps{x, y};
    return multi_exp(bases, exps);
  }

  /// prod bases[i]^exps[i] in one interleaved pass.
  Element multi_exp(std::span<const Element* const> bases, std::span<const Scalar> exps) const {
    if (bases.size() != exps.size()) throw Error(Errc::invalid_input, "multi_exp size mismatch");
    std::vector<const EC_POINT*> points;
    std::vector<detail::BnPtr> owned;
    std::vector<const BIGNUM*> scalars;
    for (std::size_t i = 0; i < bases.size(); ++i) {
      points.push_back(bases[i]->get());
      owned.push_back(detail::to_bignum(exps[i].value()));
      scalars.push_back(owned.back().get());
    }
    Element r;
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wdeprecated-declarations"
    EC_POINTs_mul(detail::p256_curve(), r.get(), nullptr, points.size(), points.data(), scalars.data(),
                  detail::bn_ctx());
#pragma GCC diagnostic pop
    return r;
  }

  Bytes encode(const Element& a) const {
    if (!a.enc_valid_) {
      a.enc_.fill(0);
      if (!EC_POINT_is_at_infinity(detail::p256_curve(), a.get())) {
        EC_POINT_point2oct(detail::p256_curve(), a.get(), POINT_CONVERSION_COMPRESSED, a.enc_.data(), a.enc_.size(),
                           detail::bn_ctx());
      }
      a.enc_valid_ = true;
    }
    return Bytes(a.enc_.begin(), a.enc_.end());
  }

  /// Accepts only canonical compressed points on the curve (or the all-zero
  /// identity encoding).
  std::optional<Element> decode(ByteView data) const {
    if (data.size() != kElementSize) return std::nullopt;
    bool all_zero = std::all_of(data.begin(), data.end(), [](std::uint8_t b) { return b == 0; });
    if (all_zero) {
      Element id;
      id.enc_valid_ = true;
      return id;
    }
    if (data[0] != 0x02 && data[0] != 0x03) return std::nullopt;
    Element r;
    if (EC_POINT_oct2point(detail::p256_curve(), r.get(), data.data(), data.size(), detail::bn_ctx()) != 1) {
      ERR_clear_error();
      return std::nullopt;
    }
    // libcrypto already refuses x >= p for compressed input.
    std::copy(data.begin(), data.end(), r.enc_.begin());
    r.enc_valid_ = true;
    return r;
  }

 private:
  Element hash_to_group(std::string_view label) const {
    for (std::uint32_t counter = 0;; ++counter) {
      Bytes ctr;
      append_u32_be(ctr, counter);
      Digest d = hash_concat({as_bytes("dreip/generator"), seed_, as_bytes(label), ctr});
      Bytes candidate{0x02};
      append(candidate, d.bytes());
      if (auto point = decode(candidate)) return *point;
    }
  }

  struct Fixed {
    Element base;
    detail::FixedTable table;
  };

  ScalarField field_;
  Bytes seed_;
  Element g1_;
  Element g2_;
  std::shared_ptr<nlohmann::ordered_json> description_;
  std::shared_ptr<std::vector<Fixed>> fixed_ = std::make_shared<std::vector<Fixed>>();
};

}  // namespace dreip
