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

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dreip/bytes.hpp"

namespace dreip {

/// 32-byte SHA-256 output. Rendered as lowercase hex everywhere.
class Digest {
 public:
  static constexpr std::size_t kSize = 32;

  Digest() = default;
  explicit Digest(const std::array<std::uint8_t, kSize>& raw) : raw_(raw) {}

  static std::optional<Digest> from_bytes(ByteView data) {
    if (data.size() != kSize) return std::nullopt;
    Digest d;
    std::copy(data.begin(), data.end(), d.raw_.begin());
    return d;
  }

  static std::optional<Digest> from_hex(std::string_view hex) {
    auto bytes = dreip::from_hex(hex);
    if (!bytes) return std::nullopt;
    return from_bytes(*bytes);
  }

  static Digest require_hex(std::string_view hex) {
    auto d = from_hex(hex);
    if (!d) throw Error(Errc::parse, "malformed digest");
    return *d;
  }

  ByteView bytes() const { return raw_; }
  const std::array<std::uint8_t, kSize>& raw() const { return raw_; }
  std::string hex() const { return to_hex(raw_); }

  friend auto operator<=>(const Digest&, const Digest&) = default;

 private:
  std::array<std::uint8_t, kSize> raw_{};
};

inline Digest hash_bytes(ByteView message) {
  std::array<std::uint8_t, Digest::kSize> out{};
  SHA256(message.data(), message.size(), out.data());
  return Digest(out);
}

inline Digest hash_bytes(std::string_view message) { return hash_bytes(as_bytes(message)); }

/// Hash of the plain concatenation of the given parts.
inline Digest hash_concat(std::initializer_list<ByteView> parts) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<std::uint8_t, Digest::kSize> out{};
  bool ok = ctx && EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) == 1;
  for (ByteView p : parts) ok = ok && EVP_DigestUpdate(ctx.get(), p.data(), p.size()) == 1;
  ok = ok && EVP_DigestFinal_ex(ctx.get(), out.data(), nullptr) == 1;
  if (!ok) throw std::runtime_error("SHA-256 context failure");
  return Digest(out);
}

}  // namespace dreip
