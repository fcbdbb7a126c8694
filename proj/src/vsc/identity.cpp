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

#include "vsc/identity.hpp"

#include <fstream>

#include "vsc/storage.hpp"

namespace vsc {

KeyPair load_or_create_key(const std::filesystem::path& file) {
  if (std::filesystem::exists(file)) {
    std::ifstream in(file);
    std::string text;
    std::getline(in, text);
    try {
      return KeyPair::from_seed(to_array<32>(from_base64url(text)));
    } catch (const Error& e) {
      fail(Errc::Io, "bad key file " + file.string() + ": " + e.what());
    }
  }
  auto keys = KeyPair::generate();
  write_file_atomic(file, to_base64url(keys.secret) + "\n", 0600);
  return keys;
}

Did anchor_identity(const KeyPair& keys, const std::optional<std::string>& endpoint, RegistryClient& registry) {
  const auto gen = generate_did(keys);
  DidDocument head;
  try {
    head = registry.resolve(gen.did);
  } catch (const Error& e) {
    if (e.code() != Errc::NotFound) throw;
    registry.anchor(sign_anchor(gen.document, keys.secret));
    head = gen.document;
  }
  if (head.verification_key != keys.public_key) fail(Errc::Unauthorized, "DID is controlled by another key");
  if (head.service_endpoint != endpoint) {
    registry.anchor(sign_anchor(next_version(head, keys.public_key, endpoint), keys.secret));
  }
  return gen.did;
}

}  // namespace vsc
