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

#include "dreip/nizk/dlog.hpp"

namespace dreip {

// Receipt authentication: a Schnorr signature, i.e. a proof of knowledge of
// the machine's receipt key bound to the message through the transcript.
// The receipt key g1^sk is published in the genesis block.

template <PrimeOrderGroup G>
Transcript receipt_tag_context(ByteView message) {
  Transcript t("dreip/receipt-tag");
  t.absorb_bytes(message);
  return t;
}

template <PrimeOrderGroup G>
class ReceiptSigner {
 public:
  ReceiptSigner(const G& g, RandomSource& rng) : secret_(random_scalar(g.field(), rng)), key_(g.exp(g.g1(), secret_)) {}
  ReceiptSigner(const ReceiptSigner&) = delete;
  ReceiptSigner& operator=(const ReceiptSigner&) = delete;
  ~ReceiptSigner() { secret_.wipe(); }

  const typename G::Element& public_key() const { return key_; }

  Bytes sign(const G& g, ByteView message, RandomSource& rng) const {
    return serialize(g, prove_dlog(g, secret_, g.g1(), key_, receipt_tag_context<G>(message), rng));
  }

 private:
  Scalar secret_;
  typename G::Element key_;
};

template <PrimeOrderGroup G>
bool verify_receipt_tag(const G& g, const typename G::Element& receipt_key, ByteView message, ByteView tag) {
  auto proof = parse_dlog_proof(g, tag);
  return proof && verify_dlog(g, *proof, g.g1(), receipt_key, receipt_tag_context<G>(message));
}

}  // namespace dreip
