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

#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vsc/bytes.hpp"
#include "vsc/crypto.hpp"
#include "vsc/time.hpp"

namespace vsc {

/// The value model every signed or hashed structure is built from.
///
/// Text, integers, booleans, calendar dates, null, lists and maps. There are
/// no floats. Dates serialize exactly like the text "YYYY-MM-DD", so the
/// schema-less parser returns them as text; `as_date()` accepts either form
/// and `==` treats a date and its ISO text as the same value.
class Value {
 public:
  using List = std::vector<Value>;
  using Map = std::map<std::string, Value>;  // std::string orders by unsigned byte
  enum class Type { Null, Bool, Int, Text, Date, List, Map };

  Value() = default;
  Value(std::nullptr_t) {}
  Value(bool b) : v_(b) {}
  template <std::integral I>
    requires(!std::same_as<I, bool>)
  Value(I i) : v_(static_cast<std::int64_t>(i)) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(std::string_view s) : v_(std::string(s)) {}
  Value(Date d) : v_(d) {}
  Value(List l) : v_(std::move(l)) {}
  Value(Map m) : v_(std::move(m)) {}

  Type type() const noexcept { return static_cast<Type>(v_.index()); }
  bool is_null() const noexcept { return type() == Type::Null; }
  bool is_map() const noexcept { return type() == Type::Map; }
  bool is_list() const noexcept { return type() == Type::List; }
  bool is_text() const noexcept { return type() == Type::Text; }

  // Accessors throw Error(MalformedValue) on a type mismatch.
  bool as_bool() const;
  std::int64_t as_int() const;
  const std::string& as_text() const;
  Date as_date() const;
  const List& as_list() const;
  const Map& as_map() const;
  Map& as_map();

  /// Map member lookup; throws MalformedValue when absent.
  const Value& at(std::string_view key) const;
  const Value* find(std::string_view key) const;

  friend bool operator==(const Value& a, const Value& b);

 private:
  std::variant<std::monostate, bool, std::int64_t, std::string, Date, List, Map> v_;
};

/// Deterministic bytes: sorted keys, no whitespace, minimal integers, only
/// the mandatory string escapes. Throws MalformedValue on invalid UTF-8 or
/// an invalid date.
std::string canonicalize(const Value& v);
inline Bytes canonical_bytes(const Value& v) {
  auto s = canonicalize(v);
  return Bytes(s.begin(), s.end());
}

/// Strict inverse of canonicalize. Anything that is not the exact canonical
/// encoding of some value (whitespace, unsorted or duplicate keys, needless
/// escapes, leading zeros, floats) is rejected with MalformedValue.
Value parse(std::string_view bytes);
inline Value parse(ByteView bytes) {
  return parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

inline Hash32 digest_value(const Value& v) { return digest(canonicalize(v)); }

bool valid_utf8(std::string_view s) noexcept;

// Helpers for decoding fixed structures out of maps.

/// Throws MalformedValue unless `map` has every key in `required`, any subset
/// of `optional`, and nothing else.
void expect_keys(const Value& map, std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional = {});

template <std::size_t N>
Value encode_bytes(const std::array<std::uint8_t, N>& a) {
  return Value(to_base64url(a));
}
inline Value encode_bytes(ByteView b) { return Value(to_base64url(b)); }

template <std::size_t N>
std::array<std::uint8_t, N> decode_array(const Value& v) {
  return to_array<N>(from_base64url(v.as_text()));
}
inline Bytes decode_bytes(const Value& v) { return from_base64url(v.as_text()); }

inline Value encode_instant(Instant t) { return Value(t.iso()); }
inline Instant decode_instant(const Value& v) { return Instant::parse(v.as_text()); }

}  // namespace vsc
