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
#include <span>
#include <vector>

#include "dreip/dre/public_key.hpp"
#include "dreip/group/group.hpp"
#include "dreip/random.hpp"
#include "dreip/transcript.hpp"

namespace dreip {

// Proof that a ciphertext (U, V, E, W) encrypts one of n allowed vote
// encodings v_1..v_n. Branch j proves knowledge of r with
//
//   U = g1^r,  V = g2^r,  E / g1^{v_j} = h^r,  W = (c d^alpha)^r
//
// and the branches are OR-composed in the Cramer-Damgard-Schoenmakers
// style: every branch but the true one is simulated, and the challenges
// must sum to the Fiat-Shamir challenge over the whole statement.

template <PrimeOrderGroup G>
struct WellFormedBranch {
  typename G::Element a_u;
  typename G::Element a_v;
  typename G::Element a_e;
  typename G::Element a_w;
  Scalar challenge;
  Scalar response;
};

template <PrimeOrderGroup G>
struct WellFormedProof {
  std::vector<WellFormedBranch<G>> branches;
};

namespace detail {

template <PrimeOrderGroup G>
struct BranchStatement {
  std::array<typename G::Element, 4> bases;
  std::array<typename G::Element, 4> targets;
};

template <PrimeOrderGroup G>
std::vector<BranchStatement<G>> branch_statements(const G& g, const DrePublicKey<G>& pk, const Ciphertext<G>& ct,
                                                  const Scalar& alpha, std::span<const Scalar> encodings) {
  typename G::Element w_base = g.mul(pk.c, g.exp(pk.d, alpha));
  std::vector<BranchStatement<G>> out;
  out.reserve(encodings.size());
  for (const Scalar& v : encodings) {
    typename G::Element e_shifted = g.mul(ct.e, g.inverse(g.exp(g.g1(), v)));
    out.push_back({{g.g1(), g.g2(), pk.h, w_base}, {ct.u, ct.v, std::move(e_shifted), ct.w}});
  }
  return out;
}

template <PrimeOrderGroup G>
Scalar wellformed_challenge(const G& g, const DrePublicKey<G>& pk, const Ciphertext<G>& ct, const Scalar& alpha,
                            std::span<const Scalar> encodings, const std::vector<WellFormedBranch<G>>& branches) {
  Transcript t("dreip/pwf");
  t.absorb_bytes(group_binding(g));
  t.absorb_element(g, pk.c).absorb_element(g, pk.d).absorb_element(g, pk.h);
  t.absorb_element(g, ct.u).absorb_element(g, ct.v).absorb_element(g, ct.e).absorb_element(g, ct.w);
  t.absorb_scalar(g.field(), alpha);
  t.absorb_u64(encodings.size());
  for (const Scalar& v : encodings) t.absorb_scalar(g.field(), v);
  for (const auto& b : branches) {
    t.absorb_element(g, b.a_u).absorb_element(g, b.a_v).absorb_element(g, b.a_e).absorb_element(g, b.a_w);
  }
  return t.challenge(g.field());
}

template <PrimeOrderGroup G>
bool branchwise_check(const G& g, const DrePublicKey<G>& pk, const Ciphertext<G>& ct, const Scalar& alpha,
                      std::span<const Scalar> encodings, const WellFormedProof<G>& proof) {
  auto statements = branch_statements(g, pk, ct, alpha, encodings);
  for (std::size_t j = 0; j < encodings.size(); ++j) {
    const auto& b = proof.branches[j];
    const auto& st = statements[j];
    const std::array<const typename G::Element*, 4> commit{&b.a_u, &b.a_v, &b.a_e, &b.a_w};
    for (std::size_t k = 0; k < 4; ++k) {
      if (!(g.exp(st.bases[k], b.response) == g.mul(*commit[k], g.exp(st.targets[k], b.challenge)))) return false;
    }
  }
  return true;
}

// Small-exponent batch test: all 4n branch equations folded into one
// multi-exponentiation with 128-bit weights hashed from the full proof.
// A false equation survives with probability about 2^-128, so this is only
// used when q is much larger than the weights.
inline const mpz_class kBatchWeightBound = mpz_class(1) << 160;

template <PrimeOrderGroup G>
bool batch_check(const G& g, const DrePublicKey<G>& pk, const Ciphertext<G>& ct, const Scalar& alpha,
                 std::span<const Scalar> encodings, const WellFormedProof<G>& proof) {
  const ScalarField& f = g.field();
  Transcript seed_t("dreip/pwf-batch");
  seed_t.absorb_bytes(group_binding(g));
  for (const auto* e : {&pk.c, &pk.d, &pk.h, &ct.u, &ct.v, &ct.e, &ct.w}) seed_t.absorb_element(g, *e);
  seed_t.absorb_scalar(f, alpha);
  for (const Scalar& v : encodings) seed_t.absorb_scalar(f, v);
  for (const auto& b : proof.branches) {
    seed_t.absorb_element(g, b.a_u).absorb_element(g, b.a_v).absorb_element(g, b.a_e).absorb_element(g, b.a_w);
    seed_t.absorb_scalar(f, b.challenge).absorb_scalar(f, b.response);
  }
  Digest seed = hash_bytes(seed_t.serialize());
  auto weight = [&](std::uint32_t i) {
    Bytes ctr;
    append_u32_be(ctr, i);
    Digest d = hash_concat({seed.bytes(), ctr});
    return Scalar(decode_integer(ByteView(d.bytes()).first(16)) + 1);
  };

  // sum over j,k of w_jk (z_j B_k - e_j T_jk - A_jk) must vanish, where
  // T_j2 = E - v_j g1 moves a v_j e_j term onto g1.
  Scalar s_g1 = f.zero(), s_g2 = f.zero(), s_h = f.zero(), s_w = f.zero();
  Scalar s_u = f.zero(), s_v = f.zero(), s_e = f.zero(), s_ww = f.zero();
  std::vector<const typename G::Element*> bases;
  std::vector<Scalar> exps;
  std::uint32_t counter = 0;
  for (std::size_t j = 0; j < encodings.size(); ++j) {
    const auto& b = proof.branches[j];
    const std::array<const typename G::Element*, 4> commit{&b.a_u, &b.a_v, &b.a_e, &b.a_w};
    std::array<Scalar, 4> w;
    for (auto& x : w) x = weight(counter++);
    s_g1 = f.add(s_g1, f.add(f.mul(w[0], b.response), f.mul(w[2], f.mul(b.challenge, encodings[j]))));
    s_g2 = f.add(s_g2, f.mul(w[1], b.response));
    s_h = f.add(s_h, f.mul(w[2], b.response));
    s_w = f.add(s_w, f.mul(w[3], b.response));
    s_u = f.add(s_u, f.mul(w[0], b.challenge));
    s_v = f.add(s_v, f.mul(w[1], b.challenge));
    s_e = f.add(s_e, f.mul(w[2], b.challenge));
    s_ww = f.add(s_ww, f.mul(w[3], b.challenge));
    for (std::size_t k = 0; k < 4; ++k) {
      bases.push_back(commit[k]);
      exps.push_back(f.neg(w[k]));
    }
  }
  const std::array<const typename G::Element*, 9> fixed{&g.g1(), &g.g2(), &pk.h,   &pk.c, &pk.d,
                                                       &ct.u,   &ct.v,   &ct.e, &ct.w};
  const std::array<Scalar, 9> fixed_exps{s_g1, s_g2, s_h, s_w, f.mul(s_w, alpha), f.neg(s_u), f.neg(s_v), f.neg(s_e),
                                         f.neg(s_ww)};
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    bases.push_back(fixed[i]);
    exps.push_back(fixed_exps[i]);
  }
  return g.multi_exp(bases, exps) == g.identity();
}

}  // namespace detail

/// `candidate` is 1-based. Refuses (invalid_input) unless the ciphertext is
/// exactly the honest encryption of encodings[candidate - 1] under r.
template <PrimeOrderGroup G>
WellFormedProof<G> prove_wellformed(const G& g, const DrePublicKey<G>& pk, const Ciphertext<G>& ct,
                                    const Scalar& alpha, std::span<const Scalar> encodings, std::size_t candidate,
                                    const Scalar& r, RandomSource& rng) {
  if (encodings.size() < 2) throw Error(Errc::invalid_input, "need at least two vote encodings");
  if (candidate < 1 || candidate > encodings.size()) throw Error(Errc::invalid_input, "candidate out of range");
  const ScalarField& f = g.field();
  const std::size_t real = candidate - 1;
  auto statements = detail::branch_statements(g, pk, ct, alpha, encodings);
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(g.exp(statements[real].bases[k], r) == statements[real].targets[k])) {
      throw Error(Errc::invalid_input, "ciphertext is not an encryption of the chosen candidate");
    }
  }

  WellFormedProof<G> proof;
  proof.branches.resize(encodings.size());
  Scalar nonce = random_scalar(f, rng);
  Scalar simulated_sum = f.zero();
  for (std::size_t j = 0; j < encodings.size(); ++j) {
    auto& b = proof.branches[j];
    const auto& st = statements[j];
    std::array<typename G::Element, 4> commit;
    if (j == real) {
      for (std::size_t k = 0; k < 4; ++k) commit[k] = g.exp(st.bases[k], nonce);
    } else {
      b.challenge = random_exponent(f, rng);
      b.response = random_exponent(f, rng);
      simulated_sum = f.add(simulated_sum, b.challenge);
      Scalar minus_e = f.neg(b.challenge);
      for (std::size_t k = 0; k < 4; ++k) commit[k] = exp2(g, st.bases[k], b.response, st.targets[k], minus_e);
    }
    b.a_u = std::move(commit[0]);
    b.a_v = std::move(commit[1]);
    b.a_e = std::move(commit[2]);
    b.a_w = std::move(commit[3]);
  }
  Scalar global = detail::wellformed_challenge(g, pk, ct, alpha, encodings, proof.branches);
  auto& mine = proof.branches[real];
  mine.challenge = f.sub(global, simulated_sum);
  mine.response = f.add(nonce, f.mul(mine.challenge, r));
  nonce.wipe();
  return proof;
}

template <PrimeOrderGroup G>
bool verify_wellformed(const G& g, const DrePublicKey<G>& pk, const Ciphertext<G>& ct, const Scalar& alpha,
                       std::span<const Scalar> encodings, const WellFormedProof<G>& proof) {
  const ScalarField& f = g.field();
  if (encodings.size() < 2 || proof.branches.size() != encodings.size()) return false;
  Scalar sum = f.zero();
  for (const auto& b : proof.branches) {
    if (!f.in_range(b.challenge) || !f.in_range(b.response)) return false;
    sum = f.add(sum, b.challenge);
  }
  if (!(sum == detail::wellformed_challenge(g, pk, ct, alpha, encodings, proof.branches))) return false;
  if constexpr (requires(std::span<const typename G::Element* const> b, std::span<const Scalar> x) {
                  g.multi_exp(b, x);
                }) {
    if (f.order() > detail::kBatchWeightBound) return detail::batch_check(g, pk, ct, alpha, encodings, proof);
  }
  return detail::branchwise_check(g, pk, ct, alpha, encodings, proof);
}

/// Layout: u32 branch count, then all branch commitments (A_U, A_V, A_E,
/// A_W per branch), then all challenges, then all responses.
template <PrimeOrderGroup G>
Bytes serialize(const G& g, const WellFormedProof<G>& proof) {
  Bytes out;
  append_u32_be(out, static_cast<std::uint32_t>(proof.branches.size()));
  for (const auto& b : proof.branches) {
    for (const auto* e : {&b.a_u, &b.a_v, &b.a_e, &b.a_w}) append(out, g.encode(*e));
  }
  for (const auto& b : proof.branches) append(out, g.field().encode(b.challenge));
  for (const auto& b : proof.branches) append(out, g.field().encode(b.response));
  return out;
}

template <PrimeOrderGroup G>
std::optional<WellFormedProof<G>> parse_wellformed_proof(const G& g, ByteView raw) {
  if (raw.size() < 4) return std::nullopt;
  const std::size_t n = read_u32_be(raw);
  const std::size_t ew = g.element_size();
  const std::size_t sw = g.field().encoded_size();
  if (n == 0 || n > 1024 || raw.size() != 4 + n * (4 * ew + 2 * sw)) return std::nullopt;
  WellFormedProof<G> proof;
  proof.branches.resize(n);
  std::size_t at = 4;
  for (auto& b : proof.branches) {
    for (auto* e : {&b.a_u, &b.a_v, &b.a_e, &b.a_w}) {
      auto d = g.decode(raw.subspan(at, ew));
      if (!d) return std::nullopt;
      *e = std::move(*d);
      at += ew;
    }
  }
  for (auto field : {&WellFormedBranch<G>::challenge, &WellFormedBranch<G>::response}) {
    for (auto& b : proof.branches) {
      auto s = g.field().decode(raw.subspan(at, sw));
      if (!s) return std::nullopt;
      b.*field = std::move(*s);
      at += sw;
    }
  }
  return proof;
}

}  // namespace dreip
