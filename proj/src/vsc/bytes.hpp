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

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vsc/error.hpp"

namespace vsc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

using Hash32 = std::array<std::uint8_t, 32>;
using Salt = std::array<std::uint8_t, 32>;
using Nonce = std::array<std::uint8_t, 16>;
using Signature = std::array<std::uint8_t, 64>;

inline ByteView as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

template <std::size_t N>
inline ByteView as_bytes(const std::array<std::uint8_t, N>& a) noexcept {
  return {a.data(), a.size()};
}

inline void append(Bytes& out, ByteView in) { out.insert(out.end(), in.begin(), in.end()); }
inline void append(Bytes& out, std::string_view in) { append(out, as_bytes(in)); }

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

/// RFC 4648 base64url, no padding. Decoding rejects non-canonical input.
std::string to_base64url(ByteView data);
Bytes from_base64url(std::string_view text);

/// RFC 4648 base32, lowercase alphabet, no padding. Decoding rejects
/// uppercase and non-zero trailing bits.
std::string to_base32(ByteView data);
Bytes from_base32(std::string_view text);

template <std::size_t N>
std::array<std::uint8_t, N> to_array(ByteView data) {
  if (data.size() != N) {
    fail(Errc::MalformedValue, "expected " + std::to_string(N) + " bytes, got " + std::to_string(data.size()));
  }
  std::array<std::uint8_t, N> a{};
  std::copy(data.begin(), data.end(), a.begin());
  return a;
}

/// Cryptographically secure random bytes.
void random_fill(std::span<std::uint8_t> out);

template <std::size_t N>
std::array<std::uint8_t, N> random_array() {
  std::array<std::uint8_t, N> a{};
  random_fill(a);
  return a;
}

/// Best-effort zeroisation of secret material.
void secure_wipe(std::span<std::uint8_t> data) noexcept;

/// Byte-substring test used by the leak scanners.
bool contains(ByteView haystack, ByteView needle) noexcept;

}  // namespace vsc
