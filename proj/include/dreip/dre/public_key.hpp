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

#include "dreip/group/group.hpp"

namespace dreip {

/// Published DRE key (c, d, h) = (g1^x1 g2^x2, g1^y1 g2^y2, g1^z).
template <PrimeOrderGroup G>
struct DrePublicKey {
  typename G::Element c;
  typename G::Element d;
  typename G::Element h;
};

/// One encrypted ballot (U, V, E, W).
template <PrimeOrderGroup G>
struct Ciphertext {
  typename G::Element u;
  typename G::Element v;
  typename G::Element e;
  typename G::Element w;
};

}  // namespace dreip
