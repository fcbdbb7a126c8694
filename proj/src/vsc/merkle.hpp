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

#pragma once

#include <span>
#include <vector>

#include "vsc/canonical.hpp"

namespace vsc {

// Binary Merkle tree with domain-separated hashing:
//   interior = SHA-256(0x01 || left || right)
// Leaves are hashed by the caller (see credential.hpp). An odd node at any
// level is promoted unchanged to the next level.

enum class Side { Left, Right };  // which side the sibling sits on

struct PathStep {
  Hash32 sibling{};
  Side side = Side::Left;

  bool operator==(const PathStep&) const = default;
};

using MerklePath = std::vector<PathStep>;

Hash32 hash_interior(const Hash32& left, const Hash32& right);

/// Throws InvalidArgument for an empty leaf set.
Hash32 merkle_root(std::span<const Hash32> leaves);
MerklePath merkle_path(std::span<const Hash32> leaves, std::size_t index);
Hash32 root_from_path(const Hash32& leaf, const MerklePath& path);

Value path_to_value(const MerklePath& path);
MerklePath path_from_value(const Value& v);

}  // namespace vsc
