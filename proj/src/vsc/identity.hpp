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

#include <filesystem>
#include <optional>
#include <string>

#include "vsc/registry.hpp"

namespace vsc {

/// Loads a base64url Ed25519 seed from `file`, or creates one (mode 0600).
/// Throws Io.
KeyPair load_or_create_key(const std::filesystem::path& file);

/// The DID for `keys` is derived from a version-0 document without a
/// service endpoint, so it survives endpoint changes. Anchors that document
/// if missing, then anchors a successor whenever the current head's
/// endpoint differs from `endpoint`.
Did anchor_identity(const KeyPair& keys, const std::optional<std::string>& endpoint, RegistryClient& registry);

}  // namespace vsc
