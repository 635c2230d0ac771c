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

#include <openssl/rand.h>

#include <cstdint>
#include <span>
#include <string_view>

#include "dreip/bytes.hpp"
#include "dreip/hash.hpp"
#include "dreip/scalar.hpp"

namespace dreip {

/// Source of uniformly random bytes. Handles are not shared across threads.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }
};

/// Operating-system CSPRNG via OpenSSL.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
      throw Error(Errc::entropy, "RAND_bytes failed");
    }
  }
};

/// Deterministic stream SHA-256(seed || counter) for reproducible runs and
/// tests. Not for production secrets.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(ByteView seed) : seed_(hash_bytes(seed)) {}
  SeededRandom(std::string_view label, std::uint64_t seed) {
    Bytes material(label.begin(), label.end());
    material.push_back(0x00);
    append_u64_be(material, seed);
    seed_ = hash_bytes(material);
  }

  void fill(std::span<std::uint8_t> out) override {
    for (auto& b : out) {
      if (offset_ == block_.size()) refill();
      b = block_[offset_++];
    }
  }

 private:
  void refill() {
    Bytes counter;
    append_u64_be(counter, counter_++);
    block_ = hash_concat({seed_.bytes(), counter}).raw();
    offset_ = 0;
  }

  Digest seed_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, Digest::kSize> block_{};
  std::size_t offset_ = Digest::kSize;
};

/// Uniform integer in [0, bound) by masked rejection sampling.
inline mpz_class random_below(const mpz_class& bound, RandomSource& rng) {
  if (bound <= 0) throw Error(Errc::invalid_input, "empty sampling range");
  std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  std::size_t width = (bits + 7) / 8;
  std::uint8_t top_mask = static_cast<std::uint8_t>(0xff >> (width * 8 - bits));
  Bytes buf(width);
  for (;;) {
    rng.fill(buf);
    buf[0] &= top_mask;
    mpz_class v = decode_integer(buf);
    if (v < bound) return v;
  }
}

/// Uniform in {0, ..., q-1}.
inline Scalar random_exponent(const ScalarField& field, RandomSource& rng) {
  return Scalar(random_below(field.order(), rng));
}

/// Uniform in Z_q^*, i.e. {1, ..., q-1}.
inline Scalar random_scalar(const ScalarField& field, RandomSource& rng) {
  mpz_class v = random_below(field.order() - 1, rng);
  return Scalar(v + 1);
}

}  // namespace dreip
