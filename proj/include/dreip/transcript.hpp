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

#include <string>
#include <utility>

#include "dreip/bytes.hpp"
#include "dreip/group/group.hpp"
#include "dreip/hash.hpp"
#include "dreip/scalar.hpp"

namespace dreip {

/// Fiat-Shamir transcript. Every absorbed item is framed as
/// [1-byte type tag][4-byte big-endian length][bytes], so two different
/// absorb sequences never serialize identically.
class Transcript {
 public:
  enum class Kind : std::uint8_t { scalar = 0x01, element = 0x02, bytes = 0x03 };

  explicit Transcript(std::string domain_tag) : tag_(std::move(domain_tag)) {}

  const std::string& domain_tag() const { return tag_; }

  Transcript& absorb(Kind kind, ByteView data) {
    absorbed_.push_back(static_cast<std::uint8_t>(kind));
    append_u32_be(absorbed_, static_cast<std::uint32_t>(data.size()));
    append(absorbed_, data);
    return *this;
  }

  Transcript& absorb_bytes(ByteView data) { return absorb(Kind::bytes, data); }
  Transcript& absorb_bytes(std::string_view data) { return absorb(Kind::bytes, as_bytes(data)); }

  Transcript& absorb_u64(std::uint64_t v) {
    Bytes raw;
    append_u64_be(raw, v);
    return absorb(Kind::bytes, raw);
  }

  Transcript& absorb_scalar(const ScalarField& field, const Scalar& s) { return absorb(Kind::scalar, field.encode(s)); }

  template <PrimeOrderGroup G>
  Transcript& absorb_element(const G& g, const typename G::Element& e) {
    return absorb(Kind::element, g.encode(e));
  }

  Bytes serialize() const {
    Bytes out;
    append_u32_be(out, static_cast<std::uint32_t>(tag_.size()));
    append(out, as_bytes(tag_));
    append(out, absorbed_);
    return out;
  }

  /// SHA-256 of the serialized transcript, reduced mod q.
  Scalar challenge(const ScalarField& field) const {
    if (tag_.empty()) throw Error(Errc::configuration, "transcript needs a domain tag");
    return field.reduce(decode_integer(hash_bytes(serialize()).bytes()));
  }

 private:
  std::string tag_;
  Bytes absorbed_;
};

inline Scalar hash_to_scalar(const Transcript& t, const ScalarField& field) { return t.challenge(field); }

}  // namespace dreip
