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

#include <span>

#include "dreip/random.hpp"
#include "dreip/scalar.hpp"

namespace dreip {

enum class PolyVerdict { consistent, inconsistent };

/// One round of the evaluate-at-a-random-point identity test.
struct PolyDemoResult {
  Scalar point;
  Scalar value_a;
  Scalar value_b;
  PolyVerdict verdict = PolyVerdict::inconsistent;
  std::size_t degree = 0;  // d
  mpz_class field_size;    // q

  /// Two distinct polynomials of degree <= d agree on at most d points, so a
  /// false "consistent" happens with probability at most d/q.
  double soundness_bound() const { return static_cast<double>(degree) / field_size.get_d(); }
};

/// Coefficients are ordered from the constant term upward.
inline Scalar evaluate_polynomial(const ScalarField& f, std::span<const Scalar> coeffs, const Scalar& x) {
  Scalar acc = f.zero();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = f.add(f.mul(acc, x), *it);
  return acc;
}

inline std::size_t polynomial_degree(const ScalarField& f, std::span<const Scalar> coeffs) {
  std::size_t deg = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!f.reduce(coeffs[i].value()).is_zero()) deg = i;
  }
  return deg;
}

inline PolyDemoResult poly_identity_demo(const ScalarField& f, std::span<const Scalar> coeffs_a,
                                         std::span<const Scalar> coeffs_b, RandomSource& rng) {
  if (coeffs_a.empty() || coeffs_b.empty()) throw Error(Errc::invalid_input, "empty coefficient list");
  PolyDemoResult out;
  out.degree = std::max(polynomial_degree(f, coeffs_a), polynomial_degree(f, coeffs_b));
  out.field_size = f.order();
  if (out.degree >= f.order()) throw Error(Errc::invalid_input, "degree must be below the field size");
  out.point = random_exponent(f, rng);
  out.value_a = evaluate_polynomial(f, coeffs_a, out.point);
  out.value_b = evaluate_polynomial(f, coeffs_b, out.point);
  out.verdict = out.value_a == out.value_b ? PolyVerdict::consistent : PolyVerdict::inconsistent;
  return out;
}

}  // namespace dreip
