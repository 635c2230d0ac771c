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

#include <vector>

#include "dreip/scalar.hpp"

namespace dreip {

/// Two candidates vote 0 or 1; n >= 3 candidates vote N^(j-1) for a voter
/// bound N, so the tally t reads off as base-N digits.
struct VoteEncoding {
  std::size_t n_candidates = 2;
  std::uint64_t voter_bound = 0;  // N; 0 means "none" (two candidates only)

  /// Largest confirmed-ballot count the encoding can absorb without a digit
  /// carrying or t wrapping mod q.
  mpz_class max_confirmed(const ScalarField& f) const {
    if (n_candidates == 2 && voter_bound == 0) return f.order() - 1;
    return mpz_class(std::to_string(voter_bound)) - 1;
  }

  /// Throws configuration unless every reachable tally stays below q.
  void validate(const ScalarField& f) const {
    if (n_candidates < 2) throw Error(Errc::configuration, "need at least two candidates");
    if (n_candidates >= 3 && voter_bound < 2) throw Error(Errc::configuration, "voter bound N must be >= 2");
    if (voter_bound == 0) return;
    mpz_class n(std::to_string(voter_bound));
    mpz_class largest_tally = n_candidates == 2 ? n - 1 : power(n, n_candidates) - 1;
    if (largest_tally >= f.order()) {
      throw Error(Errc::configuration, "N^n exceeds the group order; tallies would wrap");
    }
  }

  mpz_class encode_integer(std::size_t candidate) const {
    if (candidate < 1 || candidate > n_candidates) throw Error(Errc::invalid_input, "candidate out of range");
    if (n_candidates == 2) return mpz_class(static_cast<unsigned long>(candidate - 1));
    return power(mpz_class(std::to_string(voter_bound)), candidate - 1);
  }

  Scalar encode(const ScalarField& f, std::size_t candidate) const { return f.reduce(encode_integer(candidate)); }

  std::vector<Scalar> encodings(const ScalarField& f) const {
    std::vector<Scalar> out;
    for (std::size_t j = 1; j <= n_candidates; ++j) out.push_back(encode(f, j));
    return out;
  }

 private:
  static mpz_class power(const mpz_class& base, std::size_t e) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
  }
};

inline Scalar encode_vote(const ScalarField& f, std::size_t candidate, std::size_t n_candidates,
                          std::uint64_t voter_bound) {
  return VoteEncoding{n_candidates, voter_bound}.encode(f, candidate);
}

}  // namespace dreip
