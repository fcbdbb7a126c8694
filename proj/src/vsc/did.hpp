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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsc/canonical.hpp"
#include "vsc/crypto.hpp"

namespace vsc {

/// `did:local:<id>` where id is unpadded lowercase base32 of the SHA-256 of
/// the version-0 document's canonical bytes (with the `did` field omitted,
/// since the id cannot hash itself).
struct Did {
  static constexpr std::string_view kPrefix = "did:local:";
  static constexpr std::size_t kIdLength = 52;  // ceil(256 / 5)

  std::string id;

  std::string str() const { return std::string(kPrefix) + id; }
  static Did parse(std::string_view text);

  auto operator<=>(const Did&) const = default;
};

struct DidDocument {
  Did did;
  PublicKey verification_key{};
  std::optional<std::string> service_endpoint;
  std::int64_t version = 0;
  std::optional<Hash32> previous_hash;

  Value to_value() const;
  static DidDocument from_value(const Value& v);

  /// The content the did id is derived from: everything except `did`.
  Value id_basis() const;
  Hash32 hash() const { return digest_value(to_value()); }

  bool operator==(const DidDocument&) const = default;
};

Did derive_did(const DidDocument& version0);

/// Structural checks that do not need the history: version 0 has no link and
/// derives its own id; later versions carry a link.
bool self_consistent(const DidDocument& doc);

struct GeneratedDid {
  Did did;
  DidDocument document;
  KeyPair keys;
};

GeneratedDid generate_did(std::optional<std::string> service_endpoint = std::nullopt);
GeneratedDid generate_did(const KeyPair& keys, std::optional<std::string> service_endpoint = std::nullopt);

/// Successor document linked to `current`, carrying `new_key`.
DidDocument next_version(const DidDocument& current, const PublicKey& new_key,
                         std::optional<std::string> service_endpoint);

/// A document submitted to the registry with a signature from the key that
/// currently controls the DID (the document's own key for version 0).
struct AnchorRequest {
  DidDocument document;
  Signature signature{};

  Value to_value() const;
  static AnchorRequest from_value(const Value& v);
};

AnchorRequest sign_anchor(const DidDocument& doc, const Seed& controller);

/// Validates an anchored history (oldest first) and returns its head.
/// Throws NotFound for an empty history and ChainBroken when the version
/// sequence or hash links are inconsistent.
DidDocument resolve_history(const std::vector<DidDocument>& history);

}  // namespace vsc
