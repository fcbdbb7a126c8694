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

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vsc/disclosure.hpp"

namespace vsc {

inline constexpr std::string_view kFairnessForAllScheme = "FairnessForAll";
inline constexpr std::int64_t kRequestLifetime = 10 * kMinute;

enum class ItemMode { Reveal, Predicate };

struct RequestItem {
  std::string claim;
  ItemMode mode = ItemMode::Reveal;
  std::optional<PredicateRequest> predicate;

  static RequestItem reveal(std::string claim);
  static RequestItem threshold(std::string claim, Direction op, std::int64_t threshold);

  Value to_value() const;
  static RequestItem from_value(const Value& v);
};

/// "At least `years` old on `on`", phrased over the credential's
/// birth_year carrier: birth_year <= on.year - years.
RequestItem age_at_least(int years, const Date& on);

struct PresentationRequest {
  std::string request_id;
  Did verifier;
  Nonce nonce{};
  std::optional<std::string> scheme;  // set: scheme request; unset: itemized
  std::vector<RequestItem> items;
  std::string purpose;
  Instant expires_at;
  /// Where the holder posts its response.
  std::string verifier_endpoint;
  /// Audience the verifier claims membership of.
  std::optional<std::string> audience;

  bool itemized() const noexcept { return !scheme.has_value(); }
  /// Throws InvalidShape unless exactly one of scheme/items is used and
  /// every predicate item carries its predicate.
  void check_shape() const;

  Value to_value() const;
  static PresentationRequest from_value(const Value& v);
};

enum class Outcome { Presented, Denied };
std::string_view outcome_name(Outcome o) noexcept;

struct PresentationResponse {
  std::string request_id;
  Outcome outcome = Outcome::Denied;
  std::optional<Presentation> presentation;

  static PresentationResponse denied(std::string request_id) { return {std::move(request_id), Outcome::Denied, {}}; }

  Value to_value() const;
  static PresentationResponse from_value(const Value& v);
};

/// What a verifier asks for. Either a scheme tag or a list of items.
struct ScenarioSpec {
  std::optional<std::string> scheme;
  std::vector<RequestItem> items;
  std::string purpose;

  Value to_value() const;
  static ScenarioSpec from_value(const Value& v);
};

/// New request with a fresh UUID and nonce; the nonce is registered in
/// `nonces`. Throws InvalidShape.
PresentationRequest build_request(const Did& verifier, std::string verifier_endpoint,
                                  std::optional<std::string> audience, const ScenarioSpec& spec, Instant now,
                                  NonceCache& nonces, std::int64_t lifetime = kRequestLifetime);

std::string random_uuid();

// ------------------------------------------------------------ holder side

struct HeldCredential {
  VerifiableCredential credential;
  HolderSecrets secrets;
};

enum class ConsentKind { AcceptAll, Deny, Partial };
std::string_view consent_kind_name(ConsentKind k) noexcept;
ConsentKind parse_consent_kind(std::string_view s);

struct ConsentDecision {
  std::string request_id;
  ConsentKind kind = ConsentKind::Deny;
  std::vector<std::size_t> granted;  // item indices, Partial only
  Instant decided_at;
};

struct HolderIdentity {
  Did did;
  KeyPair keys;
};

struct HandleResult {
  PresentationResponse response;
  /// Why the response is DENIED, for the holder only; never sent.
  std::optional<Error> local_error;
  /// Claims opened or proven in the presentation, for the audit log.
  std::vector<std::string> shared;
  std::optional<std::string> credential_id;
};

/// Applies the holder's decision. Every failure collapses to DENIED on the
/// wire; the cause is reported in `local_error`.
HandleResult handle_request(const PresentationRequest& req, const std::vector<HeldCredential>& wallet,
                            const HolderIdentity& holder, const ConsentDecision& consent, Instant now);

// ---------------------------------------------------------- verifier side

struct VerificationOutcome {
  std::string request_id;
  std::string customer_ref;
  Outcome outcome = Outcome::Denied;
  Verdict verdict;        // meaningful when Presented
  std::vector<Fact> facts;
  Instant received_at;

  bool ok() const noexcept { return outcome == Outcome::Presented && verdict.ok(); }
  Value to_value() const;
};

/// Verifier-side request bookkeeping. A request moves issued -> responded
/// exactly once; once responded, further PRESENTED responses are reported
/// as NonceReplayed and further DENIED ones as AlreadyDecided.
class VerifierExchange {
 public:
  VerifierExchange(Did verifier, std::string endpoint, std::optional<std::string> audience,
                   const RegistryView& registry, NonceCache& nonces);

  /// `holder`, when given, is the only DID whose presentation is accepted.
  PresentationRequest open(const std::string& customer_ref, std::optional<Did> holder, const ScenarioSpec& spec,
                           Instant now);
  /// Errors: UnknownRequest, RequestExpired, AlreadyDecided.
  VerificationOutcome receive(const PresentationResponse& resp, Instant now);

  const Did& verifier() const noexcept { return verifier_; }
  /// Endpoint placed in requests opened from now on.
  void set_endpoint(std::string endpoint);
  std::optional<std::string> customer_of(const std::string& request_id) const;
  /// Drops closed or expired requests older than `now - keep`.
  void prune(Instant now, std::int64_t keep = NonceCache::kDefaultRetention);

 private:
  struct Pending {
    PresentationRequest request;
    std::string customer_ref;
    std::optional<Did> holder;
    bool responded = false;
  };

  Did verifier_;
  std::string endpoint_;
  std::optional<std::string> audience_;
  const RegistryView& registry_;
  NonceCache& nonces_;
  mutable std::mutex mu_;
  std::map<std::string, Pending> pending_;
};

}  // namespace vsc
