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

#include <concepts>
#include <optional>
#include <string>
#include <type_traits>

#include "dreip/group/modp.hpp"
#include "dreip/group/p256.hpp"

namespace dreip {

/// A cyclic group of prime order q written multiplicatively, with two
/// independent generators and a fixed-width canonical element encoding.
template <class G>
concept PrimeOrderGroup =
    std::copyable<G> && std::copyable<typename G::Element> &&
    requires(const G& g, const typename G::Element& a, const Scalar& k, ByteView raw) {
      { G::kTier } -> std::convertible_to<SecurityTier>;
      { G::derive(raw) } -> std::same_as<G>;
      { G::from_description(g.describe()) } -> std::same_as<G>;
      { g.field() } -> std::same_as<const ScalarField&>;
      { g.identity() } -> std::same_as<typename G::Element>;
      { g.g1() } -> std::same_as<const typename G::Element&>;
      { g.g2() } -> std::same_as<const typename G::Element&>;
      { g.mul(a, a) } -> std::same_as<typename G::Element>;
      { g.inverse(a) } -> std::same_as<typename G::Element>;
      { g.exp(a, k) } -> std::same_as<typename G::Element>;
      { g.encode(a) } -> std::same_as<Bytes>;
      { g.decode(raw) } -> std::same_as<std::optional<typename G::Element>>;
      { g.element_size() } -> std::convertible_to<std::size_t>;
      { a == a } -> std::convertible_to<bool>;
    };

static_assert(PrimeOrderGroup<ModpGroup>);
static_assert(PrimeOrderGroup<P256Group>);

template <PrimeOrderGroup G>
G derive_group(ByteView seed) {
  return G::derive(seed);
}

/// Invokes `fn(std::type_identity<G>{})` with the group type for `tier`.
template <class Fn>
decltype(auto) with_group_type(SecurityTier tier, Fn&& fn) {
  if (tier == SecurityTier::test) return std::forward<Fn>(fn)(std::type_identity<ModpGroup>{});
  return std::forward<Fn>(fn)(std::type_identity<P256Group>{});
}

template <PrimeOrderGroup G>
std::string element_hex(const G& g, const typename G::Element& a) {
  return to_hex(g.encode(a));
}

template <PrimeOrderGroup G>
typename G::Element require_element_hex(const G& g, std::string_view hex) {
  auto raw = from_hex(hex);
  if (!raw) throw Error(Errc::parse, "malformed element hex");
  auto e = g.decode(*raw);
  if (!e) throw Error(Errc::parse, "encoding is not a group element");
  return *e;
}

/// g^a * h^b.
template <PrimeOrderGroup G>
typename G::Element exp2(const G& g, const typename G::Element& a, const Scalar& x, const typename G::Element& b,
                         const Scalar& y) {
  if constexpr (requires { g.exp2(a, x, b, y); }) {
    return g.exp2(a, x, b, y);
  } else {
    return g.mul(g.exp(a, x), g.exp(b, y));
  }
}

/// Bytes that pin the whole group description into a transcript.
template <PrimeOrderGroup G>
Bytes group_binding(const G& g) {
  std::string d = g.describe().dump();
  return Bytes(d.begin(), d.end());
}

}  // namespace dreip
