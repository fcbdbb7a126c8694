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

#include "vsc/ladder.hpp"

#include <algorithm>

namespace vsc {

std::string_view direction_name(Direction d) noexcept { return d == Direction::Gte ? "GTE" : "LTE"; }

Direction parse_direction(std::string_view s) {
  if (s == "GTE") return Direction::Gte;
  if (s == "LTE") return Direction::Lte;
  fail(Errc::MalformedValue, "direction must be GTE or LTE");
}

Hash32 chain(const Hash32& seed, std::int64_t n) {
  if (n < 0 || n > kMaxLadderSpan) fail(Errc::InvalidArgument, "chain length out of range");
  std::array<std::uint8_t, kLadderTag.size() + 32> buf{};
  std::copy(kLadderTag.begin(), kLadderTag.end(), buf.begin());
  Hash32 x = seed;
  for (std::int64_t i = 0; i < n; ++i) {
    std::copy(x.begin(), x.end(), buf.begin() + kLadderTag.size());
    x = digest(buf);
  }
  return x;
}

Value LadderAnchor::to_value() const {
  return Value::Map{{"anchor", encode_bytes(anchor)},
                    {"direction", direction_name(direction)},
                    {"v_max", v_max},
                    {"v_min", v_min}};
}

LadderAnchor LadderAnchor::from_value(const Value& v) {
  expect_keys(v, {"anchor", "direction", "v_max", "v_min"});
  LadderAnchor a;
  a.anchor = decode_array<32>(v.at("anchor"));
  a.direction = parse_direction(v.at("direction").as_text());
  a.v_max = v.at("v_max").as_int();
  a.v_min = v.at("v_min").as_int();
  if (a.v_min > a.v_max || a.v_max - a.v_min > kMaxLadderSpan) fail(Errc::MalformedValue, "bad ladder range");
  return a;
}

LadderAnchor make_anchor(Direction dir, std::int64_t v_min, std::int64_t v_max, std::int64_t value,
                         const Hash32& seed) {
  if (v_min > v_max || v_max - v_min > kMaxLadderSpan) fail(Errc::LadderOutOfRange, "ladder span too large");
  if (value < v_min || value > v_max) {
    fail(Errc::LadderOutOfRange, std::to_string(value) + " outside [" + std::to_string(v_min) + ", " +
                                     std::to_string(v_max) + "]");
  }
  const std::int64_t hops = dir == Direction::Gte ? value - v_min : v_max - value;
  return {dir, v_min, v_max, chain(seed, hops)};
}

bool predicate_holds(Direction op, std::int64_t value, std::int64_t threshold) noexcept {
  return op == Direction::Gte ? value >= threshold : value <= threshold;
}

Hash32 make_witness(const LadderAnchor& ladder, const Hash32& seed, std::int64_t value, std::int64_t threshold) {
  if (!predicate_holds(ladder.direction, value, threshold)) {
    fail(Errc::PredicateUnsatisfiable, "value does not satisfy the predicate");
  }
  const std::int64_t t = std::clamp(threshold, ladder.v_min, ladder.v_max);
  return chain(seed, ladder.direction == Direction::Gte ? value - t : t - value);
}

bool check_witness(const LadderAnchor& ladder, std::int64_t threshold, const Hash32& witness) {
  std::int64_t hops;
  if (ladder.direction == Direction::Gte) {
    if (threshold > ladder.v_max) return false;
    hops = std::max(threshold, ladder.v_min) - ladder.v_min;
  } else {
    if (threshold < ladder.v_min) return false;
    hops = ladder.v_max - std::min(threshold, ladder.v_max);
  }
  return chain(witness, hops) == ladder.anchor;
}

}  // namespace vsc
