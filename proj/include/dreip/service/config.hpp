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

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dreip/dre/encoding.hpp"
#include "dreip/group/tier.hpp"
#include "dreip/io.hpp"

namespace dreip {

inline constexpr const char* kBindEnv = "DREIP_BIND";

/// Election configuration. File paths are optional; without them the
/// corresponding state lives in memory only. Relative paths in a config
/// file resolve against the file's directory.
struct ElectionConfig {
  std::string election_id;
  std::vector<std::string> candidates;
  std::uint64_t voter_bound = 0;
  SecurityTier tier = SecurityTier::test;
  std::string group_seed = "dreip";
  std::vector<std::string> roll;

  std::optional<std::filesystem::path> registry_path;
  std::optional<std::filesystem::path> board_path;
  std::optional<std::filesystem::path> ledger_path;
  std::optional<std::filesystem::path> spent_path;
  std::optional<std::filesystem::path> tally_path;
  std::string bind = "127.0.0.1:8080";

  VoteEncoding encoding() const { return {candidates.size(), voter_bound}; }

  /// Throws configuration on anything inconsistent. Group-order overflow is
  /// checked once the group is derived.
  void validate() const {
    if (election_id.empty()) throw Error(Errc::configuration, "election_id is required");
    if (candidates.size() < 2) throw Error(Errc::configuration, "need at least two candidates");
    std::set<std::string> labels(candidates.begin(), candidates.end());
    if (labels.size() != candidates.size()) throw Error(Errc::configuration, "candidate labels must be distinct");
    if (candidates.size() >= 3 && voter_bound < 2) throw Error(Errc::configuration, "voter_bound N is required for 3+ candidates");
    if (voter_bound != 0 && roll.size() >= voter_bound) {
      throw Error(Errc::configuration, "voter_bound must exceed the size of the roll");
    }
    std::set<std::string> ids(roll.begin(), roll.end());
    if (ids.size() != roll.size()) throw Error(Errc::configuration, "duplicate voter ids in the roll");
    if (group_seed.empty()) throw Error(Errc::configuration, "group_seed must not be empty");
    bind_host_port();
  }

  std::pair<std::string, int> bind_host_port() const {
    auto colon = bind.rfind(':');
    if (colon == std::string::npos || colon == 0) throw Error(Errc::configuration, "bind must be host:port");
    int port = 0;
    try {
      port = std::stoi(bind.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(Errc::configuration, "bad port in bind address");
    }
    if (port < 0 || port > 65535) throw Error(Errc::configuration, "bad port in bind address");
    return {bind.substr(0, colon), port};
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["election_id"] = election_id;
    j["candidates"] = candidates;
    j["voter_bound"] = voter_bound;
    j["tier"] = to_string(tier);
    j["group_seed"] = group_seed;
    j["roll"] = roll;
    auto put = [&](const char* key, const std::optional<std::filesystem::path>& p) {
      if (p) j[key] = p->string();
    };
    put("registry", registry_path);
    put("board", board_path);
    put("ledger", ledger_path);
    put("spent_leaves", spent_path);
    put("tally", tally_path);
    j["bind"] = bind;
    return j;
  }

  static ElectionConfig from_json(const nlohmann::json& j, const std::filesystem::path& base = {}) {
    ElectionConfig c;
    try {
      static const std::set<std::string> known = {"election_id", "candidates", "voter_bound", "tier", "group_seed",
                                                  "roll", "registry", "board", "ledger", "spent_leaves", "tally",
                                                  "bind"};
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (known.count(it.key()) == 0) throw Error(Errc::configuration, "unknown config key '" + it.key() + "'");
      }
      c.election_id = j.at("election_id").get<std::string>();
      c.candidates = j.at("candidates").get<std::vector<std::string>>();
      c.voter_bound = j.value("voter_bound", std::uint64_t{0});
      c.tier = parse_tier(j.value("tier", std::string("test")));
      c.group_seed = j.value("group_seed", c.group_seed);
      c.roll = j.value("roll", std::vector<std::string>{});
      auto path = [&](const char* key) -> std::optional<std::filesystem::path> {
        if (!j.contains(key)) return std::nullopt;
        std::filesystem::path p = j.at(key).get<std::string>();
        return p.is_relative() && !base.empty() ? base / p : p;
      };
      c.registry_path = path("registry");
      c.board_path = path("board");
      c.ledger_path = path("ledger");
      c.spent_path = path("spent_leaves");
      c.tally_path = path("tally");
      c.bind = j.value("bind", c.bind);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::configuration, std::string("config: ") + e.what());
    }
    if (const char* env = std::getenv(kBindEnv); env != nullptr && *env != '\0') c.bind = env;
    c.validate();
    return c;
  }

  static ElectionConfig load(const std::filesystem::path& file) {
    std::string text = read_file(file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::configuration, std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j, file.parent_path());
  }
};

}  // namespace dreip
