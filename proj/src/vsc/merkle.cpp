// Copyright 2026 The vsc Authors
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

#include "vsc/merkle.hpp"

namespace vsc {

Hash32 hash_interior(const Hash32& left, const Hash32& right) {
  std::array<std::uint8_t, 65> buf{};
  buf[0] = 0x01;
  std::copy(left.begin(), left.end(), buf.begin() + 1);
  std::copy(right.begin(), right.end(), buf.begin() + 33);
  return digest(buf);
}

namespace {

std::vector<Hash32> next_level(const std::vector<Hash32>& level) {
  std::vector<Hash32> up;
  up.reserve((level.size() + 1) / 2);
  for (std::size_t i = 0; i + 1 < level.size(); i += 2) up.push_back(hash_interior(level[i], level[i + 1]));
  if (level.size() % 2 == 1) up.push_back(level.back());
  return up;
}

}  // namespace

Hash32 merkle_root(std::span<const Hash32> leaves) {
  if (leaves.empty()) fail(Errc::InvalidArgument, "merkle tree needs at least one leaf");
  std::vector<Hash32> level(leaves.begin(), leaves.end());
  while (level.size() > 1) level = next_level(level);
  return level.front();
}

MerklePath merkle_path(std::span<const Hash32> leaves, std::size_t index) {
  if (index >= leaves.size()) fail(Errc::InvalidArgument, "leaf index out of range");
  MerklePath path;
  std::vector<Hash32> level(leaves.begin(), leaves.end());
  while (level.size() > 1) {
    const std::size_t sibling = index ^ 1u;
    if (sibling < level.size()) {
      path.push_back({level[sibling], index % 2 == 0 ? Side::Right : Side::Left});
    }
    level = next_level(level);
    index /= 2;
  }
  return path;
}

Hash32 root_from_path(const Hash32& leaf, const MerklePath& path) {
  Hash32 acc = leaf;
  for (const auto& step : path) {
    acc = step.side == Side::Left ? hash_interior(step.sibling, acc) : hash_interior(acc, step.sibling);
  }
  return acc;
}

Value path_to_value(const MerklePath& path) {
  Value::List out;
  for (const auto& s : path) {
    out.push_back(Value::Map{{"hash", encode_bytes(s.sibling)}, {"side", s.side == Side::Left ? "L" : "R"}});
  }
  return out;
}

MerklePath path_from_value(const Value& v) {
  MerklePath path;
  for (const auto& e : v.as_list()) {
    expect_keys(e, {"hash", "side"});
    const auto& side = e.at("side").as_text();
    if (side != "L" && side != "R") fail(Errc::MalformedValue, "merkle side must be L or R");
    path.push_back({decode_array<32>(e.at("hash")), side == "L" ? Side::Left : Side::Right});
  }
  return path;
}

}  // namespace vsc
