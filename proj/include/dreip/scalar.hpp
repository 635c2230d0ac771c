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

#include <cstring>
#include <string>

#include "dreip/bytes.hpp"
#include "dreip/error.hpp"

namespace dreip {

/// An exponent of the group, kept reduced modulo the group order by the
/// ScalarField that produced it.
class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(mpz_class value) : value_(std::move(value)) {}
  explicit Scalar(unsigned long value) : value_(value) {}

  const mpz_class& value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  /// Overwrites the limbs before releasing them. Best effort only.
  void wipe() {
    mpz_ptr raw = value_.get_mpz_t();
    std::size_t limbs = mpz_size(raw);
    if (limbs > 0) {
      mp_limb_t* data = mpz_limbs_modify(raw, static_cast<mp_size_t>(limbs));
      std::memset(data, 0, limbs * sizeof(mp_limb_t));
    }
    value_ = 0;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }

 private:
  mpz_class value_;
};

/// Big-endian, zero-padded to `width` bytes. Throws if the value does not fit.
inline Bytes encode_integer(const mpz_class& value, std::size_t width) {
  if (value < 0) throw Error(Errc::invalid_input, "negative integer encoding");
  std::size_t needed = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  if (value == 0) needed = 0;
  if (needed > width) throw Error(Errc::invalid_input, "integer wider than encoding");
  Bytes out(width, 0);
  std::size_t count = 0;
  mpz_export(out.data() + (width - needed), &count, 1, 1, 1, 0, value.get_mpz_t());
  return out;
}

inline mpz_class decode_integer(ByteView data) {
  mpz_class out;
  if (!data.empty()) mpz_import(out.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  return out;
}

inline std::size_t byte_width(const mpz_class& modulus) {
  return (mpz_sizeinbase(modulus.get_mpz_t(), 2) + 7) / 8;
}

/// Arithmetic in the integers modulo a prime group order q.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(mpz_class order) : order_(std::move(order)), width_(byte_width(order_)) {}

  const mpz_class& order() const { return order_; }
  std::size_t encoded_size() const { return width_; }

  Scalar zero() const { return Scalar(0ul); }
  Scalar one() const { return Scalar(1ul); }

  Scalar reduce(const mpz_class& v) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), order_.get_mpz_t());
    return Scalar(std::move(r));
  }
  Scalar from_u64(std::uint64_t v) const { return reduce(mpz_class(std::to_string(v))); }

  Scalar add(const Scalar& a, const Scalar& b) const { return reduce(a.value() + b.value()); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return reduce(a.value() - b.value()); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return reduce(a.value() * b.value()); }
  Scalar neg(const Scalar& a) const { return reduce(-a.value()); }

  bool in_range(const Scalar& a) const { return a.value() >= 0 && a.value() < order_; }

  Bytes encode(const Scalar& a) const { return encode_integer(a.value(), width_); }

  /// Rejects wrong widths and non-canonical values (>= q).
  std::optional<Scalar> decode(ByteView data) const {
    if (data.size() != width_) return std::nullopt;
    mpz_class v = decode_integer(data);
    if (v >= order_) return std::nullopt;
    return Scalar(std::move(v));
  }

  std::string to_hex(const Scalar& a) const { return dreip::to_hex(encode(a)); }

  Scalar require_hex(std::string_view hex) const {
    auto bytes = from_hex(hex);
    if (!bytes) throw Error(Errc::parse, "malformed scalar hex");
    auto s = decode(*bytes);
    if (!s) throw Error(Errc::parse, "scalar out of range");
    return *s;
  }

 private:
  mpz_class order_;
  std::size_t width_ = 0;
};

}  // namespace dreip
