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
#include <stdexcept>
#include <string>
#include <string_view>

namespace dreip {

/// Machine-readable failure reasons. The service maps these onto API
/// reason codes, so the spelling returned by `to_string` is part of the
/// wire contract.
enum class Errc {
  invalid_input,
  configuration,
  entropy,
  invalid_parameters,
  already_registered,
  not_eligible,
  registration_closed,
  protocol_order,
  ledger,
  ordering,
  not_found,
  wrong_variant,
  incomplete_election,
  decode,
  parse,
  double_vote,
  bad_membership,
  wrong_election,
  busy,
  board_rejected,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_input: return "invalid_input";
    case Errc::configuration: return "configuration";
    case Errc::entropy: return "entropy";
    case Errc::invalid_parameters: return "invalid_parameters";
    case Errc::already_registered: return "already_registered";
    case Errc::not_eligible: return "not_eligible";
    case Errc::registration_closed: return "registration_closed";
    case Errc::protocol_order: return "protocol_order";
    case Errc::ledger: return "ledger";
    case Errc::ordering: return "ordering";
    case Errc::not_found: return "not_found";
    case Errc::wrong_variant: return "wrong_variant";
    case Errc::incomplete_election: return "incomplete_election";
    case Errc::decode: return "decode";
    case Errc::parse: return "parse";
    case Errc::double_vote: return "double_vote";
    case Errc::bad_membership: return "bad_membership";
    case Errc::wrong_election: return "wrong_election";
    case Errc::busy: return "busy";
    case Errc::board_rejected: return "board_rejected";
  }
  return "unknown";
}

inline std::optional<Errc> errc_from_string(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Errc::board_rejected); ++i) {
    if (to_string(static_cast<Errc>(i)) == name) return static_cast<Errc>(i);
  }
  return std::nullopt;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dreip
