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

#include <functional>
#include <optional>
#include <vector>

#include "dreip/dre/encoding.hpp"
#include "dreip/dre/receipt.hpp"
#include "dreip/dre/signer.hpp"

namespace dreip {

/// Samples (x1, x2, y1, y2, z) from [0, q), returns (c, d, h) and wipes the
/// scalars. Nothing else survives the call.
template <PrimeOrderGroup G>
DrePublicKey<G> keygen(const G& g, RandomSource& rng) {
  const ScalarField& f = g.field();
  Scalar x1 = random_exponent(f, rng), x2 = random_exponent(f, rng);
  Scalar y1 = random_exponent(f, rng), y2 = random_exponent(f, rng);
  Scalar z = random_exponent(f, rng);
  DrePublicKey<G> pk{exp2(g, g.g1(), x1, g.g2(), x2), exp2(g, g.g1(), y1, g.g2(), y2), g.exp(g.g1(), z)};
  for (Scalar* s : {&x1, &x2, &y1, &y2, &z}) s->wipe();
  return pk;
}

template <PrimeOrderGroup G>
nlohmann::ordered_json public_key_json(const G& g, const DrePublicKey<G>& pk) {
  nlohmann::ordered_json j;
  j["c"] = element_hex(g, pk.c);
  j["d"] = element_hex(g, pk.d);
  j["h"] = element_hex(g, pk.h);
  return j;
}

template <PrimeOrderGroup G>
DrePublicKey<G> parse_public_key(const G& g, const nlohmann::ordered_json& j) {
  return {wire::element(g, j, "c"), wire::element(g, j, "d"), wire::element(g, j, "h")};
}

template <PrimeOrderGroup G>
struct PendingBallot {
  std::uint64_t index = 0;
  std::size_t candidate = 0;
  Scalar r;
  Scalar v;
  BallotContent<G> content;
};

template <PrimeOrderGroup G>
struct DreState {
  Scalar t, s, s1, m;
  typename G::Element n, n1;
  std::optional<PendingBallot<G>> pending;
  std::vector<std::uint64_t> audited;
  std::vector<std::uint64_t> confirmed;
  std::uint64_t next_index = 1;
  bool closed = false;
  bool erased = false;
};

/// Fresh state: all scalars zero, both accumulators the identity.
template <PrimeOrderGroup G>
DreState<G> init_election(const G& g, const ScalarField& f, const VoteEncoding& encoding) {
  encoding.validate(f);
  DreState<G> st;
  st.t = st.s = st.s1 = st.m = f.zero();
  st.n = st.n1 = g.identity();
  return st;
}

template <PrimeOrderGroup G>
struct Decision {
  ReceiptSecondPart<G> second;
  Receipt<G> receipt;
};

/// Test-only observer of per-ballot randomness. Production code never sets it.
using SecretTap = std::function<void(std::uint64_t index, const Scalar& r, const Scalar& v)>;

/// A single DRE machine: strictly alternating encrypt / decide, followed by
/// one publish_final.
template <PrimeOrderGroup G>
class DreMachine {
 public:
  DreMachine(G group, DrePublicKey<G> pk, VoteEncoding encoding, RandomSource& rng, SecretTap tap = {})
      : g_(std::move(group)),
        pk_(std::move(pk)),
        encoding_(encoding),
        encodings_(),
        rng_(rng),
        signer_(g_, rng),
        tap_(std::move(tap)),
        state_(init_election(g_, g_.field(), encoding_)) {
    encodings_ = encoding_.encodings(g_.field());
  }

  const G& group() const { return g_; }
  const DrePublicKey<G>& public_key() const { return pk_; }
  const typename G::Element& receipt_key() const { return signer_.public_key(); }
  const VoteEncoding& encoding() const { return encoding_; }
  const DreState<G>& state() const { return state_; }
  bool has_pending() const { return state_.pending.has_value(); }

  BallotFirstPart<G> encrypt_ballot(std::size_t candidate) {
    if (state_.closed) throw Error(Errc::protocol_order, "voting phase is closed");
    if (state_.pending) throw Error(Errc::protocol_order, "a ballot is awaiting audit or confirmation");
    if (candidate < 1 || candidate > encoding_.n_candidates) throw Error(Errc::invalid_input, "candidate out of range");
    if (mpz_class(static_cast<unsigned long>(state_.confirmed.size())) >= encoding_.max_confirmed(g_.field())) {
      throw Error(Errc::configuration, "voter bound reached");
    }
    const ScalarField& f = g_.field();
    PendingBallot<G> p;
    p.index = state_.next_index;
    p.candidate = candidate;
    p.v = encodings_[candidate - 1];
    p.r = random_scalar(f, rng_);

    BallotContent<G>& c = p.content;
    c.index = p.index;
    c.ct.u = g_.exp(g_.g1(), p.r);
    c.ct.v = g_.exp(g_.g2(), p.r);
    c.ct.e = g_.mul(g_.exp(pk_.h, p.r), g_.exp(g_.g1(), p.v));
    c.alpha = compute_alpha(g_, c.ct);
    c.ct.w = g_.exp(g_.mul(pk_.c, g_.exp(pk_.d, c.alpha)), p.r);
    c.pwf = prove_wellformed(g_, pk_, c.ct, c.alpha, std::span<const Scalar>(encodings_), candidate, p.r, rng_);

    Scalar s1 = f.add(state_.s1, p.r);
    auto n1 = g_.mul(state_.n1, c.ct.u);
    c.pk_s1 = prove_dlog(g_, s1, g_.g1(), n1, pk_s1_context(p.index), rng_);

    BallotFirstPart<G> first{c, sign(first_part_body(g_, c))};
    state_.s1 = std::move(s1);
    state_.n1 = std::move(n1);
    state_.next_index++;
    if (tap_) tap_(p.index, p.r, p.v);
    state_.pending = std::move(p);
    return first;
  }

  /// Reveals (r, v); the aggregates t, s, m, n are untouched.
  Decision<G> decide_audit() {
    PendingBallot<G>& p = require_pending();
    SecondPartBody<G> body = AuditedOpening{p.r, p.v};
    Decision<G> out = finish(p, body);
    state_.audited.push_back(p.index);
    clear_pending();
    return out;
  }

  Decision<G> decide_confirm() {
    PendingBallot<G>& p = require_pending();
    const ScalarField& f = g_.field();
    Scalar t = f.add(state_.t, p.v);
    Scalar s = f.add(state_.s, p.r);
    Scalar m = f.add(state_.m, f.mul(p.r, p.content.alpha));
    auto n = g_.mul(state_.n, p.content.ct.u);
    SecondPartBody<G> body = ConfirmedProof<G>{prove_dlog(g_, s, g_.g1(), n, pk_s_context(p.index), rng_)};
    Decision<G> out = finish(p, body);
    state_.t = std::move(t);
    state_.s = std::move(s);
    state_.m = std::move(m);
    state_.n = std::move(n);
    state_.confirmed.push_back(p.index);
    clear_pending();
    return out;
  }

  /// Closes the voting phase, emits (t, s, m) and erases s, s1, m.
  FinalTally<G> publish_final() {
    if (state_.pending) throw Error(Errc::protocol_order, "resolve the pending ballot first");
    if (state_.erased) throw Error(Errc::protocol_order, "final tally already published");
    state_.closed = true;
    FinalTally<G> out{state_.t, state_.s, state_.m, {}};
    out.auth_tag = sign(final_tally_body(g_, out));
    state_.s.wipe();
    state_.s1.wipe();
    state_.m.wipe();
    state_.erased = true;
    return out;
  }

  /// Monitoring view of the state. Never contains pending (r, v) or key
  /// material; after publish_final it no longer contains s, s1, m either.
  nlohmann::ordered_json snapshot() const {
    const ScalarField& f = g_.field();
    nlohmann::ordered_json j;
    j["t"] = f.to_hex(state_.t);
    if (!state_.erased) {
      j["s"] = f.to_hex(state_.s);
      j["s1"] = f.to_hex(state_.s1);
      j["m"] = f.to_hex(state_.m);
    }
    j["n"] = element_hex(g_, state_.n);
    j["n1"] = element_hex(g_, state_.n1);
    j["pending"] = state_.pending ? nlohmann::ordered_json(state_.pending->index) : nlohmann::ordered_json();
    j["audited"] = state_.audited;
    j["confirmed"] = state_.confirmed;
    j["next_index"] = state_.next_index;
    j["closed"] = state_.closed;
    return j;
  }

 private:
  PendingBallot<G>& require_pending() {
    if (!state_.pending) throw Error(Errc::protocol_order, "no ballot is pending");
    return *state_.pending;
  }

  Decision<G> finish(const PendingBallot<G>& p, const SecondPartBody<G>& body) {
    Decision<G> out{{p.index, body, sign(second_part_body(g_, p.index, body))},
                    {p.content, body, sign(receipt_body(g_, p.content, body))}};
    return out;
  }

  void clear_pending() {
    state_.pending->r.wipe();
    state_.pending->v.wipe();
    state_.pending.reset();
  }

  Bytes sign(const std::string& body) { return signer_.sign(g_, as_bytes(body), rng_); }

  G g_;
  DrePublicKey<G> pk_;
  VoteEncoding encoding_;
  std::vector<Scalar> encodings_;
  RandomSource& rng_;
  ReceiptSigner<G> signer_;
  SecretTap tap_;
  DreState<G> state_;
};

}  // namespace dreip
