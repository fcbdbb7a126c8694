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
#include <stdexcept>
#include <string>
#include <string_view>

namespace vsc {

/// Every failure the core can raise. The C API maps these one-to-one onto
/// vsc_status values, so append only.
enum class Errc {
  InvalidArgument,
  MalformedValue,
  MalformedPayload,
  NotFound,
  ChainBroken,
  Unauthorized,
  NonMonotoneStatus,
  SchemaViolation,
  LadderOutOfRange,
  StatusSlotTaken,
  PredicateUnsatisfiable,
  GroupViolation,
  AudienceViolation,
  UnknownClaim,
  InvalidShape,
  UnknownRequest,
  RequestExpired,
  AlreadyDecided,
  RootMismatch,
  RegistryUnreachable,
  EndpointUnreachable,
  UnknownCustomer,
  ParseError,
  ChecksumError,
  WrongPassphrase,
  Io,
};

std::string_view errc_name(Errc code) noexcept;
std::optional<Errc> errc_from_name(std::string_view name) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code), line_(line) {}

  Errc code() const noexcept { return code_; }
  /// Source line for ingest diagnostics (1-based).
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  Errc code_;
  std::optional<std::size_t> line_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace vsc
