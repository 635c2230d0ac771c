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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dreip/hash.hpp"
#include "dreip/io.hpp"

namespace dreip {

/// One link of the board. `payload` is the exact document bytes (genesis
/// manifest, merged receipt or final tally).
struct Block {
  std::uint64_t height = 0;
  Digest prev_hash;
  Digest payload_hash;
  std::int64_t timestamp = 0;
  std::string payload;

  /// H(height || prev_hash || payload_hash || timestamp), integers as
  /// 8-byte big-endian.
  Digest header_hash() const {
    Bytes header;
    append_u64_be(header, height);
    append(header, prev_hash.bytes());
    append(header, payload_hash.bytes());
    append_u64_be(header, static_cast<std::uint64_t>(timestamp));
    return hash_bytes(header);
  }
};

struct ChainCheck {
  bool ok = true;
  std::optional<std::uint64_t> first_break;
  std::string reason;
};

/// Timestamp source; the default is the logical clock (timestamp = height),
/// which keeps simulated transcripts reproducible.
using BlockClock = std::function<std::int64_t(std::uint64_t height)>;

/// Hash chain without proof-of-work. Blocks are only ever appended.
class Chain {
 public:
  Chain() = default;
  explicit Chain(std::vector<Block> blocks) : blocks_(std::move(blocks)) {}

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }
  const Block& at(std::size_t height) const { return blocks_.at(height); }

  /// All-zero before genesis.
  Digest head_hash() const { return blocks_.empty() ? Digest{} : blocks_.back().header_hash(); }

  /// The block that append would add.
  Block next_block(std::string payload, const BlockClock& clock = {}) const {
    Block b;
    b.height = blocks_.size();
    b.prev_hash = head_hash();
    b.payload_hash = hash_bytes(payload);
    b.timestamp = clock ? clock(b.height) : static_cast<std::int64_t>(b.height);
    b.payload = std::move(payload);
    return b;
  }

  /// `b` must be exactly next_block(...) for the current head.
  void push(Block b) {
    if (b.height != blocks_.size() || !(b.prev_hash == head_hash())) {
      throw Error(Errc::ordering, "block does not extend the head");
    }
    blocks_.push_back(std::move(b));
  }

 private:
  std::vector<Block> blocks_;
};

/// Re-derives every payload hash and link from genesis.
inline ChainCheck verify_chain(const Chain& chain) {
  Digest prev{};
  for (const Block& b : chain.blocks()) {
    auto fail = [&](std::string why) { return ChainCheck{false, b.height, std::move(why)}; };
    if (b.height != static_cast<std::uint64_t>(&b - chain.blocks().data())) return fail("non-contiguous height");
    if (!(b.prev_hash == prev)) return fail("prev_hash does not link to the previous header");
    if (!(b.payload_hash == hash_bytes(b.payload))) return fail("payload hash mismatch");
    prev = b.header_hash();
  }
  return {};
}

// Export: one JSON object per line with height, prev_hash, payload_hash,
// timestamp, hash (informational) and payload (the document as a string).

inline std::string block_line(const Block& b) {
  nlohmann::ordered_json j;
  j["height"] = b.height;
  j["prev_hash"] = b.prev_hash.hex();
  j["payload_hash"] = b.payload_hash.hex();
  j["timestamp"] = b.timestamp;
  j["hash"] = b.header_hash().hex();
  j["payload"] = b.payload;
  return j.dump();
}

inline Block parse_block_line(std::string_view line) {
  try {
    auto j = nlohmann::json::parse(line);
    Block b;
    b.height = j.at("height").get<std::uint64_t>();
    b.prev_hash = Digest::require_hex(j.at("prev_hash").get<std::string>());
    b.payload_hash = Digest::require_hex(j.at("payload_hash").get<std::string>());
    b.timestamp = j.at("timestamp").get<std::int64_t>();
    b.payload = j.at("payload").get<std::string>();
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("bad block line: ") + e.what());
  }
}

inline std::string export_ndjson(const Chain& chain) {
  std::string out;
  for (const Block& b : chain.blocks()) out += block_line(b) + "\n";
  return out;
}

/// Imports without validating links; verify_chain reports any break.
inline Chain import_ndjson(std::string_view text) {
  std::vector<Block> blocks;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty()) blocks.push_back(parse_block_line(line));
    pos = end + 1;
  }
  return Chain(std::move(blocks));
}

// Persistence file: the 8-byte magic "DREIPBB1", then per block
//   u32 record_length || u64 height || prev_hash[32] || payload_hash[32] || i64 timestamp || payload
// with all integers big-endian.

inline constexpr std::string_view kBoardMagic = "DREIPBB1";

inline Bytes block_record(const Block& b) {
  Bytes rec;
  append_u64_be(rec, b.height);
  append(rec, b.prev_hash.bytes());
  append(rec, b.payload_hash.bytes());
  append_u64_be(rec, static_cast<std::uint64_t>(b.timestamp));
  append(rec, as_bytes(b.payload));
  Bytes out;
  append_u32_be(out, static_cast<std::uint32_t>(rec.size()));
  append(out, rec);
  return out;
}

inline Bytes serialize_chain(const Chain& chain) {
  Bytes out(kBoardMagic.begin(), kBoardMagic.end());
  for (const Block& b : chain.blocks()) append(out, block_record(b));
  return out;
}

inline Chain parse_chain(ByteView data) {
  if (data.size() < kBoardMagic.size() ||
      std::string_view(reinterpret_cast<const char*>(data.data()), kBoardMagic.size()) != kBoardMagic) {
    throw Error(Errc::parse, "not a board file");
  }
  std::vector<Block> blocks;
  std::size_t pos = kBoardMagic.size();
  auto u64 = [&](std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data[at + i];
    return v;
  };
  constexpr std::size_t kFixed = 8 + 32 + 32 + 8;
  while (pos < data.size()) {
    if (data.size() - pos < 4) throw Error(Errc::parse, "truncated board record length");
    std::size_t len = read_u32_be(data.subspan(pos, 4));
    pos += 4;
    if (len < kFixed || data.size() - pos < len) throw Error(Errc::parse, "truncated board record");
    Block b;
    b.height = u64(pos);
    b.prev_hash = *Digest::from_bytes(data.subspan(pos + 8, 32));
    b.payload_hash = *Digest::from_bytes(data.subspan(pos + 40, 32));
    b.timestamp = static_cast<std::int64_t>(u64(pos + 72));
    b.payload.assign(reinterpret_cast<const char*>(data.data() + pos + kFixed), len - kFixed);
    blocks.push_back(std::move(b));
    pos += len;
  }
  return Chain(std::move(blocks));
}

/// Reads either the binary persistence file or an NDJSON export.
inline Chain load_chain_file(const std::filesystem::path& path) {
  std::string text = read_file(path);
  if (text.rfind(kBoardMagic, 0) == 0) return parse_chain(as_bytes(text));
  return import_ndjson(text);
}

inline void save_chain_file(const std::filesystem::path& path, const Chain& chain) {
  Bytes raw = serialize_chain(chain);
  write_file_atomically(path, std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
}

}  // namespace dreip
