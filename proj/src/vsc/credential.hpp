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
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vsc/canonical.hpp"
#include "vsc/did.hpp"
#include "vsc/ladder.hpp"
#include "vsc/merkle.hpp"
#include "vsc/registry.hpp"

namespace vsc {

// ----------------------------------------------------------------- schemas

inline constexpr std::string_view kVulnerabilityStatusCredential = "VulnerabilityStatusCredential";
inline constexpr std::string_view kFairnessForAllCredential = "FairnessForAllCredential";
inline constexpr std::string_view kFinancialAudience = "financial";
inline constexpr std::string_view kDriverContextGroup = "driver-context";

inline constexpr std::array<std::string_view, 4> kDriverClaims = {
    "driver_health", "driver_life_events", "driver_low_resilience", "driver_low_capability"};

enum class AttrKind { Text, Integer, Boolean, Date };

struct LadderSpec {
  Direction direction = Direction::Gte;
  std::int64_t v_min = 0;
  std::int64_t v_max = 0;

  bool operator==(const LadderSpec&) const = default;
};

struct AttributeSpec {
  std::string name;
  AttrKind kind = AttrKind::Text;
  bool required = true;
  std::optional<LadderSpec> ladder;  // set => predicate-capable (integers only)
  std::optional<std::string> group;
};

struct DisclosureGroup {
  std::string group_id;
  std::vector<std::string> members;  // sorted

  bool operator==(const DisclosureGroup&) const = default;
};

struct SchemaDefinition {
  std::string name;
  std::vector<AttributeSpec> attributes;
  std::optional<std::string> intended_audience;

  const AttributeSpec* find(std::string_view attr) const;
  /// Groups derived from the attributes' group ids, ordered by id.
  std::vector<DisclosureGroup> groups() const;
};

const SchemaDefinition& vulnerability_status_schema();
const SchemaDefinition& fairness_for_all_schema();
/// nullptr for unknown names.
const SchemaDefinition* builtin_schema(std::string_view name);

// ------------------------------------------------------------- credentials

struct StatusRef {
  std::string list_id;
  std::int64_t index = 0;

  auto operator<=>(const StatusRef&) const = default;
};

/// The salt-free signed envelope. Claim values, salts and ladder seeds never
/// appear here; they are bound only through `claims_root`.
struct VerifiableCredential {
  std::string credential_id;
  std::string schema;
  Did issuer;
  Did subject;
  Instant issued_at;
  Instant expires_at;
  std::optional<std::string> intended_audience;
  StatusRef status;
  Hash32 claims_root{};
  std::vector<DisclosureGroup> groups;
  std::string suite{kSuiteId};
  Signature signature{};

  /// Everything the issuer signs (all fields but the signature).
  Value envelope_value() const;
  /// What credential_id is derived from (envelope minus the id itself).
  Value id_basis() const;
  Value to_value() const;
  static VerifiableCredential from_value(const Value& v);

  bool operator==(const VerifiableCredential&) const = default;
};

std::string derive_credential_id(const VerifiableCredential& vc);

/// Commitment to a claim value: SHA-256(salt || "name" || value), where
/// "name" and value are canonical encodings (self-delimiting).
Hash32 claim_commitment(const Salt& salt, std::string_view name, const Value& value);
/// Leaf: SHA-256(0x00 || "name" || commitment || ladder-anchor-bytes?).
Hash32 claim_leaf(std::string_view name, const Hash32& commitment, const std::optional<LadderAnchor>& ladder);

struct ClaimSecret {
  std::string name;
  Value value;
  Salt salt{};
  std::optional<LadderSpec> ladder;
  std::optional<Hash32> ladder_seed;

  Hash32 commitment() const { return claim_commitment(salt, name, value); }
  std::optional<LadderAnchor> anchor() const;
  Hash32 leaf() const { return claim_leaf(name, commitment(), anchor()); }
};

/// Everything the holder needs to open claims and build ladder witnesses.
/// Delivered to the holder once; the issuer keeps none of it.
struct HolderSecrets {
  std::string credential_id;
  std::vector<ClaimSecret> claims;  // sorted by name

  const ClaimSecret* find(std::string_view name) const;
  std::vector<Hash32> leaves() const;
  Hash32 root() const { return merkle_root(leaves()); }
  std::size_t position(std::string_view name) const;

  Value to_value() const;
  static HolderSecrets from_value(const Value& v);
};

struct IssuedCredential {
  VerifiableCredential credential;
  HolderSecrets secrets;
};

/// Slot bookkeeping for one issuer's status lists ("<prefix>0", "<prefix>1",
/// ...). Thread-safe; allocation is serialized.
class StatusAllocator {
 public:
  explicit StatusAllocator(std::string prefix = "status-") : prefix_(std::move(prefix)) {}

  /// A slot not yet handed out by next() nor claimed. Reserved only once
  /// claim() succeeds.
  StatusRef next();
  void claim(const StatusRef& ref);  // throws StatusSlotTaken
  void release(const StatusRef& ref);
  bool taken(const StatusRef& ref) const;

 private:
  std::string prefix_;
  mutable std::mutex mu_;
  std::set<StatusRef> used_;
  std::int64_t cursor_ = 0;  // global slot counter across lists
};

/// Issues a credential. `values` maps attribute name to value. The status
/// slot is claimed from `slots` and released again if issuance fails.
/// Errors: SchemaViolation, LadderOutOfRange, StatusSlotTaken.
IssuedCredential issue(const SchemaDefinition& schema, const KeyPair& issuer_keys, const Did& issuer,
                       const Did& subject, const Value::Map& values, const StatusRef& slot, StatusAllocator& slots,
                       Instant now, int validity_months = 12);

// ------------------------------------------------------------ verification

enum class FailReason {
  Malformed,
  SignatureInvalid,
  IssuerUnresolvable,
  Expired,
  Revoked,
  StatusUnavailable,
  PathMismatch,
  PredicateInvalid,
  HolderBindingInvalid,
  NonceMismatch,
  NonceReplayed,
  GroupViolation,
};

std::string_view fail_reason_name(FailReason r) noexcept;
std::optional<FailReason> parse_fail_reason(std::string_view s) noexcept;

struct Verdict {
  std::optional<FailReason> failure;

  bool ok() const noexcept { return !failure; }
  static Verdict pass() { return {}; }
  static Verdict fail(FailReason r) { return {r}; }
  std::string str() const { return ok() ? "Ok" : std::string(fail_reason_name(*failure)); }
};

/// Ok iff the issuer resolves, the signature verifies, now < expires_at and
/// the status bit is clear. Consults only the registry, never the issuer.
/// Registry transport failures propagate as RegistryUnreachable.
Verdict verify_full(const VerifiableCredential& vc, const RegistryView& registry, Instant now);

/// Publishes an empty version-0 list unless `list_id` already exists.
void ensure_status_list(const KeyPair& issuer_keys, const Did& issuer, const std::string& list_id,
                        RegistryClient& registry);

/// Sets the credential's status bit. Idempotent: an already-revoked slot
/// returns the current list without a new update. Errors: Unauthorized,
/// NotFound.
StatusList revoke(const KeyPair& issuer_keys, const Did& issuer, const StatusRef& ref, RegistryClient& registry);

}  // namespace vsc
