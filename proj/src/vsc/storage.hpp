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
#include <string_view>

namespace vsc {

/// Writes `data` to a sibling temp file, fsyncs it and renames it over
/// `path`, so readers see either the old or the new content. Throws Io.
void write_file_atomic(const std::filesystem::path& path, std::string_view data, unsigned mode = 0600);

/// Appends `data` and fsyncs before returning. Throws Io.
void append_durable(const std::filesystem::path& path, std::string_view data, unsigned mode = 0600);

/// Whole file, or nullopt when it does not exist. Throws Io.
std::optional<std::string> read_file(const std::filesystem::path& path);

}  // namespace vsc
