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

#include <cstdint>
#include <string_view>

#include "vsc/canonical.hpp"

namespace vsc {

// Hash ladders: threshold proofs over an integer using only a hash function.
//
// The issuer signs (through the claims root) an anchor that sits a known
// number of hops above a secret seed the holder keeps:
//   GTE: anchor = chain(seed, value - v_min)
//   LTE: anchor = chain(seed, v_max - value)
// To show value >= T (GTE) the holder reveals chain(seed, value - T); the
// verifier hashes it T - v_min more times and must land on the anchor.
// Producing a witness for a false statement means inverting the hash.

enum class Direction { Gte, Lte };

std::string_view direction_name(Direction d) noexcept;  // "GTE" / "LTE"
Direction parse_direction(std::string_view s);

inline constexpr std::int64_t kMaxLadderSpan = 4096;
inline constexpr std::string_view kLadderTag = "ladder:";

/// n-fold application of SHA-256("ladder:" || x); chain(s, 0) = s.
/// Throws InvalidArgument unless 0 <= n <= kMaxLadderSpan.
Hash32 chain(const Hash32& seed, std::int64_t n);

struct LadderAnchor {
  Direction direction = Direction::Gte;
  std::int64_t v_min = 0;
  std::int64_t v_max = 0;
  Hash32 anchor{};

  Value to_value() const;
  static LadderAnchor from_value(const Value& v);
  /// Canonical bytes mixed into the claim's Merkle leaf.
  std::string leaf_bytes() const { return canonicalize(to_value()); }

  bool operator==(const LadderAnchor&) const = default;
};

/// Throws LadderOutOfRange if value is outside [v_min, v_max] or the span
/// exceeds kMaxLadderSpan.
LadderAnchor make_anchor(Direction dir, std::int64_t v_min, std::int64_t v_max, std::int64_t value,
                         const Hash32& seed);

/// Whether `value op threshold` holds.
bool predicate_holds(Direction op, std::int64_t value, std::int64_t threshold) noexcept;

/// Witness for `value op threshold`; throws PredicateUnsatisfiable if false.
Hash32 make_witness(const LadderAnchor& ladder, const Hash32& seed, std::int64_t value, std::int64_t threshold);

/// Verifier side. Thresholds beyond the signed range on the trivially-true
/// side are clamped to the range edge; on the impossible side they fail.
bool check_witness(const LadderAnchor& ladder, std::int64_t threshold, const Hash32& witness);

}  // namespace vsc
