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

#include <nlohmann/json.hpp>

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dreip/board/chain.hpp"
#include "dreip/verifier/checks.hpp"

namespace dreip {

/// A failed check, tied to a ballot index or (index empty) to the final tally.
struct Failure {
  std::optional<std::uint64_t> index;
  std::string reason;
};

struct VerificationReport {
  std::string election_id;
  std::string head_hash;
  std::vector<std::string> candidates;

  bool chain_ok = true;
  std::optional<std::uint64_t> chain_break;
  std::string chain_reason;
  bool auth_ok = true;
  std::vector<Failure> auth_failures;
  bool wellformed_ok = true;
  std::vector<Failure> wellformed_failures;
  bool audit_ok = true;
  std::vector<Failure> audit_failures;
  bool tally_ok = true;
  std::vector<std::string> failed_equations;

  std::optional<std::vector<std::uint64_t>> decoded_counts;
  std::string decode_error;
  std::uint64_t audited = 0;
  std::uint64_t confirmed = 0;

  bool passed() const { return chain_ok && auth_ok && wellformed_ok && audit_ok && tally_ok; }

  /// Every ballot index named by any failure list, ascending.
  std::vector<std::uint64_t> failing_ballots() const {
    std::vector<std::uint64_t> out;
    for (const auto* list : {&auth_failures, &wellformed_failures, &audit_failures}) {
      for (const auto& f : *list) {
        if (f.index) out.push_back(*f.index);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  nlohmann::ordered_json to_json() const {
    auto failures = [](const std::vector<Failure>& list) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& f : list) {
        nlohmann::ordered_json j;
        j["index"] = f.index ? nlohmann::ordered_json(*f.index) : nlohmann::ordered_json();
        j["reason"] = f.reason;
        arr.push_back(j);
      }
      return arr;
    };
    nlohmann::ordered_json j;
    j["pass"] = passed();
    j["election_id"] = election_id;
    j["head_hash"] = head_hash;
    j["chain"] = {{"ok", chain_ok},
                  {"first_break", chain_break ? nlohmann::ordered_json(*chain_break) : nlohmann::ordered_json()},
                  {"reason", chain_reason}};
    j["auth"] = {{"ok", auth_ok}, {"failures", failures(auth_failures)}};
    j["wellformed"] = {{"ok", wellformed_ok}, {"failures", failures(wellformed_failures)}};
    j["audit"] = {{"ok", audit_ok}, {"failures", failures(audit_failures)}};
    j["tally"] = {{"ok", tally_ok}, {"failed_equations", failed_equations}};
    j["candidates"] = candidates;
    j["decoded_counts"] = decoded_counts ? nlohmann::ordered_json(*decoded_counts) : nlohmann::ordered_json();
    if (!decode_error.empty()) j["decode_error"] = decode_error;
    j["totals"] = {{"audited", audited}, {"confirmed", confirmed}};
    return j;
  }

  std::string summary() const {
    std::ostringstream out;
    auto line = [&](const char* name, bool ok, std::size_t n) {
      out << "  " << name << (ok ? "ok" : "FAIL");
      if (!ok && n > 0) out << " (" << n << " failure" << (n == 1 ? "" : "s") << ")";
      out << "\n";
    };
    out << "election " << election_id << ": " << (passed() ? "PASS" : "FAIL") << "\n";
    out << "  chain        " << (chain_ok ? "ok" : "FAIL");
    if (!chain_ok) {
      out << " at height " << (chain_break ? std::to_string(*chain_break) : "?") << ": " << chain_reason;
    }
    out << "\n";
    line("auth tags    ", auth_ok, auth_failures.size());
    line("well-formed  ", wellformed_ok, wellformed_failures.size());
    line("audits       ", audit_ok, audit_failures.size());
    line("tally        ", tally_ok, 0);
    for (const auto& e : failed_equations) out << "    failed: " << e << "\n";
    for (const auto* list : {&auth_failures, &wellformed_failures, &audit_failures}) {
      for (const auto& f : *list) {
        out << "    " << (f.index ? "ballot " + std::to_string(*f.index) : std::string("final tally")) << ": "
            << f.reason << "\n";
      }
    }
    out << "  ballots: " << audited << " audited, " << confirmed << " confirmed\n";
    if (decoded_counts) {
      for (std::size_t i = 0; i < decoded_counts->size(); ++i) {
        out << "  " << (i < candidates.size() ? candidates[i] : "candidate " + std::to_string(i + 1)) << ": "
            << (*decoded_counts)[i] << "\n";
      }
    } else if (!decode_error.empty()) {
      out << "  counts: " << decode_error << "\n";
    }
    return out.str();
  }
};

/// Per-candidate counts from t. Two candidates: (|C| - t, t). Otherwise the
/// base-N digits of t, least significant first. Throws decode when the
/// digits cannot be a tally of `confirmed` ballots.
inline std::vector<std::uint64_t> decode_tally(const mpz_class& t, std::size_t n_candidates, std::uint64_t voter_bound,
                                               std::uint64_t confirmed) {
  if (n_candidates < 2) throw Error(Errc::decode, "need at least two candidates");
  if (t < 0) throw Error(Errc::decode, "negative tally");
  if (n_candidates == 2 && voter_bound == 0) {
    if (t > confirmed) throw Error(Errc::decode, "t exceeds the number of confirmed ballots");
    std::uint64_t second = t.get_ui();
    return {confirmed - second, second};
  }
  if (voter_bound < 2) throw Error(Errc::decode, "voter bound N must be >= 2");
  mpz_class rest = t, base(std::to_string(voter_bound));
  std::vector<std::uint64_t> counts;
  mpz_class sum = 0;
  for (std::size_t j = 0; j < n_candidates; ++j) {
    mpz_class digit = rest % base;
    rest /= base;
    counts.push_back(std::stoull(digit.get_str()));
    sum += digit;
  }
  if (rest != 0) throw Error(Errc::decode, "t has more base-N digits than candidates");
  if (sum != confirmed) throw Error(Errc::decode, "counts do not sum to the number of confirmed ballots");
  return counts;
}

/// Re-checks a finished election from the board alone. The final tally is
/// `tally` when given, otherwise the tally block on the board; with neither
/// this throws incomplete_election.
template <PrimeOrderGroup G>
VerificationReport verify_election(const Chain& chain, std::optional<std::string_view> tally = std::nullopt) {
  VerificationReport rep;
  if (chain.empty()) throw Error(Errc::parse, "board has no genesis block");
  auto ctx = ElectionContext<G>::from_manifest(parse_genesis(chain.at(0).payload));
  const G& g = ctx.g;
  rep.election_id = ctx.manifest.election_id;
  rep.candidates = ctx.manifest.candidates;
  rep.head_hash = chain.head_hash().hex();

  auto check = verify_chain(chain);
  rep.chain_ok = check.ok;
  rep.chain_break = check.first_break;
  rep.chain_reason = check.reason;
  auto structural = [&](std::uint64_t height, std::string why) {
    if (!rep.chain_ok) return;
    rep.chain_ok = false;
    rep.chain_break = height;
    rep.chain_reason = std::move(why);
  };

  auto n1 = g.identity(), n = g.identity();
  auto prod_v = g.identity(), prod_e = g.identity(), prod_w = g.identity();
  std::uint64_t expected = 1;
  std::optional<std::string> posted_tally;
  for (std::size_t h = 1; h < chain.size(); ++h) {
    const std::string& payload = chain.at(h).payload;
    std::string kind = payload_kind(payload);
    if (posted_tally) {
      structural(h, "block after the final tally");
      continue;
    }
    if (kind == "final-tally") {
      posted_tally = payload;
      continue;
    }
    if (kind != "receipt") {
      structural(h, "unexpected " + kind + " block");
      continue;
    }
    std::optional<Receipt<G>> r;
    try {
      r = parse_receipt(g, payload);
    } catch (const Error& e) {
      rep.wellformed_failures.push_back({expected, std::string("unparseable receipt: ") + e.what()});
      ++expected;
      continue;
    }
    std::uint64_t index = r->content.index;
    if (index != expected) {
      rep.wellformed_failures.push_back({index, "index out of sequence, expected " + std::to_string(expected)});
    }
    expected = index + 1;
    const auto& ct = r->content.ct;
    n1 = g.mul(n1, ct.u);
    if (!r->audited()) {
      n = g.mul(n, ct.u);
      prod_v = g.mul(prod_v, ct.v);
      prod_e = g.mul(prod_e, ct.e);
      prod_w = g.mul(prod_w, ct.w);
      rep.confirmed++;
    } else {
      rep.audited++;
    }
    for (auto& issue : check_receipt(ctx, *r, n1, n)) {
      auto& list = issue.kind == CheckKind::auth         ? rep.auth_failures
                   : issue.kind == CheckKind::wellformed ? rep.wellformed_failures
                                                         : rep.audit_failures;
      list.push_back({index, std::move(issue.what)});
    }
  }

  std::string tally_text;
  if (tally) {
    tally_text = std::string(*tally);
    if (posted_tally && *posted_tally != tally_text) rep.failed_equations.push_back("supplied tally differs from the board's");
  } else if (posted_tally) {
    tally_text = *posted_tally;
  } else {
    throw Error(Errc::incomplete_election, "no final tally");
  }
  FinalTally<G> t = parse_final_tally(g, tally_text);
  if (!verify_receipt_tag(g, ctx.receipt_key, as_bytes(final_tally_body(g, t)), t.auth_tag)) {
    rep.auth_failures.push_back({std::nullopt, "final tally authentication tag does not verify"});
  }
  const auto& pk = ctx.pk;
  if (!(n == g.exp(g.g1(), t.s))) rep.failed_equations.push_back("prod U = g1^s");
  if (!(prod_v == g.exp(g.g2(), t.s))) rep.failed_equations.push_back("prod V = g2^s");
  if (!(prod_e == g.mul(g.exp(pk.h, t.s), g.exp(g.g1(), t.t)))) rep.failed_equations.push_back("prod E = h^s g1^t");
  if (!(prod_w == exp2(g, pk.c, t.s, pk.d, t.m))) rep.failed_equations.push_back("prod W = c^s d^m");

  try {
    rep.decoded_counts = decode_tally(t.t.value(), ctx.encoding.n_candidates, ctx.encoding.voter_bound, rep.confirmed);
  } catch (const Error& e) {
    rep.decode_error = e.what();
    rep.failed_equations.push_back("decode: " + rep.decode_error);
  }

  rep.auth_ok = rep.auth_failures.empty();
  rep.wellformed_ok = rep.wellformed_failures.empty();
  rep.audit_ok = rep.audit_failures.empty();
  rep.tally_ok = rep.failed_equations.empty();
  return rep;
}

/// Reads the tier from the genesis block and dispatches.
inline VerificationReport verify_election_any(const Chain& chain, std::optional<std::string_view> tally = std::nullopt) {
  if (chain.empty()) throw Error(Errc::parse, "board has no genesis block");
  SecurityTier tier = parse_genesis(chain.at(0).payload).tier();
  return with_group_type(tier, [&](auto type) {
    using G = typename decltype(type)::type;
    return verify_election<G>(chain, tally);
  });
}

}  // namespace dreip
