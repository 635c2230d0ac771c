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

#include <optional>

#include "dreip/group/group.hpp"
#include "dreip/random.hpp"
#include "dreip/transcript.hpp"

namespace dreip {

/// Non-interactive Schnorr proof of knowledge of x with statement = base^x.
template <PrimeOrderGroup G>
struct DlogProof {
  typename G::Element commitment;
  Scalar challenge;
  Scalar response;
};

namespace detail {

template <PrimeOrderGroup G>
Scalar dlog_challenge(const G& g, Transcript context, const typename G::Element& base,
                      const typename G::Element& statement, const typename G::Element& commitment) {
  context.absorb_element(g, base).absorb_element(g, statement).absorb_element(g, commitment);
  return context.challenge(g.field());
}

}  // namespace detail

template <PrimeOrderGroup G>
DlogProof<G> prove_dlog(const G& g, const Scalar& witness, const typename G::Element& base,
                        const typename G::Element& statement, const Transcript& context, RandomSource& rng) {
  if (!(g.exp(base, witness) == statement)) {
    throw Error(Errc::invalid_input, "dlog witness does not match statement");
  }
  const ScalarField& f = g.field();
  Scalar nonce = random_scalar(f, rng);
  DlogProof<G> proof{g.exp(base, nonce), Scalar{}, Scalar{}};
  proof.challenge = detail::dlog_challenge(g, context, base, statement, proof.commitment);
  proof.response = f.add(nonce, f.mul(proof.challenge, witness));
  nonce.wipe();
  return proof;
}

template <PrimeOrderGroup G>
bool verify_dlog(const G& g, const DlogProof<G>& proof, const typename G::Element& base,
                 const typename G::Element& statement, const Transcript& context) {
  const ScalarField& f = g.field();
  if (!f.in_range(proof.challenge) || !f.in_range(proof.response)) return false;
  if (!(proof.challenge == detail::dlog_challenge(g, context, base, statement, proof.commitment))) return false;
  return g.exp(base, proof.response) == g.mul(proof.commitment, g.exp(statement, proof.challenge));
}

/// Layout: commitment || challenge || response, each fixed width.
template <PrimeOrderGroup G>
Bytes serialize(const G& g, const DlogProof<G>& proof) {
  Bytes out = g.encode(proof.commitment);
  append(out, g.field().encode(proof.challenge));
  append(out, g.field().encode(proof.response));
  return out;
}

template <PrimeOrderGroup G>
std::optional<DlogProof<G>> parse_dlog_proof(const G& g, ByteView raw) {
  const std::size_t ew = g.element_size();
  const std::size_t sw = g.field().encoded_size();
  if (raw.size() != ew + 2 * sw) return std::nullopt;
  auto a = g.decode(raw.subspan(0, ew));
  auto e = g.field().decode(raw.subspan(ew, sw));
  auto z = g.field().decode(raw.subspan(ew + sw, sw));
  if (!a || !e || !z) return std::nullopt;
  return DlogProof<G>{std::move(*a), std::move(*e), std::move(*z)};
}

}  // namespace dreip
