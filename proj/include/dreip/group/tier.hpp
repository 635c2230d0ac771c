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
#include <string_view>

#include "dreip/error.hpp"

namespace dreip {

enum class SecurityTier { test, standard };

inline std::string_view to_string(SecurityTier tier) {
  return tier == SecurityTier::test ? "test" : "standard";
}

inline SecurityTier parse_tier(std::string_view name) {
  if (name == "test") return SecurityTier::test;
  if (name == "standard") return SecurityTier::standard;
  throw Error(Errc::configuration, "unknown security tier '" + std::string(name) + "'");
}

}  // namespace dreip
