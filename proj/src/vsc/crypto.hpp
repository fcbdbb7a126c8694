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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "vsc/bytes.hpp"

namespace vsc {

/// Initialises libsodium once per process. Every entry point that touches
/// sodium calls this; it is cheap after the first call.
void ensure_sodium();

/// Identifier embedded in signed envelopes so the suite can be rotated later.
inline constexpr std::string_view kSuiteId = "Ed25519/SHA-256";

/// SHA-256.
Hash32 digest(ByteView data);
inline Hash32 digest(std::string_view data) { return digest(as_bytes(data)); }

using PublicKey = std::array<std::uint8_t, 32>;
using Seed = std::array<std::uint8_t, 32>;

struct KeyPair {
  PublicKey public_key{};
  Seed secret{};

  static KeyPair generate();
  static KeyPair from_seed(const Seed& seed);
};

/// Ed25519 over `message` with the key derived from `seed`.
Signature sign(const Seed& seed, ByteView message);
bool verify_signature(const PublicKey& public_key, ByteView message, const Signature& sig) noexcept;

// Encryption at rest: Argon2id key derivation and XChaCha20-Poly1305.

using SecretKey = std::array<std::uint8_t, 32>;
using AeadNonce = std::array<std::uint8_t, 24>;
using KdfSalt = std::array<std::uint8_t, 16>;

struct KdfParams {
  std::uint64_t opslimit = 0;
  std::uint64_t memlimit = 0;  // bytes

  static KdfParams interactive();
  /// Argon2id minimums; for tests only.
  static KdfParams minimal();
};

/// Throws InvalidArgument for parameters outside Argon2id's limits and Io
/// when memory cannot be allocated.
SecretKey derive_key(std::string_view passphrase, const KdfSalt& salt, const KdfParams& params);

Bytes aead_seal(const SecretKey& key, const AeadNonce& nonce, ByteView plaintext, ByteView associated);
/// nullopt when authentication fails.
std::optional<Bytes> aead_open(const SecretKey& key, const AeadNonce& nonce, ByteView ciphertext,
                               ByteView associated);

}  // namespace vsc
