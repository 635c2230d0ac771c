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
#include <vector>

#include "dreip/board/manifest.hpp"

namespace dreip {

/// g1^r = U, g2^r = V, h^r g1^v = E and (c d^alpha)^r = W, with alpha
/// recomputed from (U, V, E). Throws wrong_variant for a confirmed receipt.
template <PrimeOrderGroup G>
bool audit_consistency(const G& g, const DrePublicKey<G>& pk, const Receipt<G>& receipt) {
  const auto* open = std::get_if<AuditedOpening>(&receipt.body);
  if (open == nullptr) throw Error(Errc::wrong_variant, "audit_consistency needs an audited receipt");
  const auto& ct = receipt.content.ct;
  Scalar alpha = compute_alpha(g, ct);
  return g.exp(g.g1(), open->r) == ct.u && g.exp(g.g2(), open->r) == ct.v &&
         g.mul(g.exp(pk.h, open->r), g.exp(g.g1(), open->v)) == ct.e &&
         g.exp(g.mul(pk.c, g.exp(pk.d, alpha)), open->r) == ct.w;
}

enum class CheckKind { auth, wellformed, audit };

inline const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::auth: return "auth";
    case CheckKind::wellformed: return "wellformed";
    case CheckKind::audit: return "audit";
  }
  return "?";
}

struct ReceiptIssue {
  CheckKind kind;
  std::string what;
};

/// Every check that applies to one receipt. `n1` and `n` are the board's
/// accumulators including this receipt (n only if it is confirmed).
template <PrimeOrderGroup G>
std::vector<ReceiptIssue> check_receipt(const ElectionContext<G>& ctx, const Receipt<G>& r,
                                        const typename G::Element& n1, const typename G::Element& n) {
  const G& g = ctx.g;
  const auto& c = r.content;
  std::vector<ReceiptIssue> issues;
  if (!verify_receipt_tag(g, ctx.receipt_key, as_bytes(receipt_body(g, c, r.body)), r.auth_tag)) {
    issues.push_back({CheckKind::auth, "authentication tag does not verify"});
  }
  if (!(c.alpha == compute_alpha(g, c.ct))) issues.push_back({CheckKind::wellformed, "alpha != H(U, V, E)"});
  if (!verify_wellformed(g, ctx.pk, c.ct, c.alpha, std::span<const Scalar>(ctx.encodings), c.pwf)) {
    issues.push_back({CheckKind::wellformed, "well-formedness proof fails"});
  }
  if (!verify_dlog(g, c.pk_s1, g.g1(), n1, pk_s1_context(c.index))) {
    issues.push_back({CheckKind::wellformed, "proof of s1 fails against the board product of U"});
  }
  if (const auto* conf = std::get_if<ConfirmedProof<G>>(&r.body)) {
    if (!verify_dlog(g, conf->pk_s, g.g1(), n, pk_s_context(c.index))) {
      issues.push_back({CheckKind::wellformed, "proof of s fails against the confirmed product of U"});
    }
  } else if (!audit_consistency(g, ctx.pk, r)) {
    issues.push_back({CheckKind::audit, "revealed (r, v) inconsistent with the ciphertext"});
  }
  return issues;
}

}  // namespace dreip
