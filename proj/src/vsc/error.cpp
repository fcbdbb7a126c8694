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

#include "vsc/error.hpp"

namespace vsc {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MalformedValue: return "MalformedValue";
    case Errc::MalformedPayload: return "MalformedPayload";
    case Errc::NotFound: return "NotFound";
    case Errc::ChainBroken: return "ChainBroken";
    case Errc::Unauthorized: return "Unauthorized";
    case Errc::NonMonotoneStatus: return "NonMonotoneStatus";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::LadderOutOfRange: return "LadderOutOfRange";
    case Errc::StatusSlotTaken: return "StatusSlotTaken";
    case Errc::PredicateUnsatisfiable: return "PredicateUnsatisfiable";
    case Errc::GroupViolation: return "GroupViolation";
    case Errc::AudienceViolation: return "AudienceViolation";
    case Errc::UnknownClaim: return "UnknownClaim";
    case Errc::InvalidShape: return "InvalidShape";
    case Errc::UnknownRequest: return "UnknownRequest";
    case Errc::RequestExpired: return "RequestExpired";
    case Errc::AlreadyDecided: return "AlreadyDecided";
    case Errc::RootMismatch: return "RootMismatch";
    case Errc::RegistryUnreachable: return "RegistryUnreachable";
    case Errc::EndpointUnreachable: return "EndpointUnreachable";
    case Errc::UnknownCustomer: return "UnknownCustomer";
    case Errc::ParseError: return "ParseError";
    case Errc::ChecksumError: return "ChecksumError";
    case Errc::WrongPassphrase: return "WrongPassphrase";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

std::optional<Errc> errc_from_name(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(Errc::Io); ++i) {
    if (errc_name(static_cast<Errc>(i)) == name) return static_cast<Errc>(i);
  }
  return std::nullopt;
}

}  // namespace vsc
