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

#include "vsc/credential.hpp"

namespace vsc {

/// An opened claim: value and salt plus the Merkle path to claims_root.
struct DisclosedClaim {
  std::string name;
  Value value;
  Salt salt{};
  std::optional<LadderAnchor> ladder;
  MerklePath path;

  Value to_value() const;
  static DisclosedClaim from_value(const Value& v);
};

/// Threshold proof over a ladder-carrying claim. The value stays hidden: the
/// leaf is rebuilt from the value commitment and the ladder anchor.
struct PredicateProof {
  std::string claim;
  Direction op = Direction::Gte;
  std::int64_t threshold = 0;
  Hash32 witness{};
  Hash32 commitment{};
  LadderAnchor ladder;
  MerklePath path;

  Value to_value() const;
  static PredicateProof from_value(const Value& v);
};

struct Presentation {
  VerifiableCredential credential;
  std::vector<DisclosedClaim> disclosed;   // sorted by name
  std::vector<PredicateProof> predicates;  // sorted by claim
  Did holder;
  Did verifier;
  Nonce nonce{};
  Instant created_at;
  Signature holder_signature{};

  /// Everything but the holder signature.
  Value body_value() const;
  Value to_value() const;
  static Presentation from_value(const Value& v);
  /// canonical(body) || nonce || verifier DID.
  Bytes signing_input() const;
};

struct PredicateRequest {
  std::string claim;
  Direction op = Direction::Gte;
  std::int64_t threshold = 0;

  bool operator==(const PredicateRequest&) const = default;
};

struct DisclosureSelection {
  std::vector<std::string> reveal;
  std::vector<PredicateRequest> predicates;
};

struct DeriveContext {
  KeyPair holder_keys;
  Did holder;
  Did verifier;
  Nonce nonce{};
  Instant now;
  /// Audience the verifier belongs to; must match a restricted credential.
  std::optional<std::string> verifier_audience;
};

/// Builds a presentation containing exactly the selected openings and
/// proofs. Does not add group members on its own: a selection revealing
/// part of a group is refused.
/// Errors: RootMismatch, UnknownClaim, GroupViolation, AudienceViolation,
/// PredicateUnsatisfiable.
Presentation derive(const VerifiableCredential& vc, const HolderSecrets& secrets, const DisclosureSelection& selection,
                    const DeriveContext& ctx);

/// `names` plus every member of any group one of them belongs to.
std::vector<std::string> expand_groups(const VerifiableCredential& vc, const std::vector<std::string>& names);

/// Single-use nonce tracker shared by everything that verifies
/// presentations. Consumption is an atomic test-and-set. Entries are kept
/// for `retention_seconds` after use (or until their registered validity
/// ends, whichever is later); at capacity, the oldest expired entry is
/// evicted first.
class NonceCache {
 public:
  static constexpr std::size_t kDefaultCapacity = 100000;
  static constexpr std::int64_t kDefaultRetention = 5 * kMinute;

  explicit NonceCache(std::size_t capacity = kDefaultCapacity, std::int64_t retention_seconds = kDefaultRetention)
      : capacity_(capacity), retention_(retention_seconds) {}

  void issue(const Nonce& nonce, Instant valid_until, Instant now);
  bool is_used(const Nonce& nonce) const;
  /// False if the nonce was already consumed.
  bool consume(const Nonce& nonce, Instant now);
  std::size_t size() const;

 private:
  struct Entry {
    bool used = false;
    Instant expires;
    std::uint64_t seq = 0;
  };
  void make_room(Instant now);
  void insert(const Nonce& nonce, Entry e, Instant now);

  std::size_t capacity_;
  std::int64_t retention_;
  mutable std::mutex mu_;
  std::map<Nonce, Entry> entries_;
  std::map<std::uint64_t, Nonce> order_;
  std::uint64_t next_seq_ = 0;
};

/// A fact the verifier learned: either a claim value or a proven predicate.
struct Fact {
  std::string claim;
  std::optional<Value> value;
  std::optional<PredicateRequest> predicate;

  Value to_value() const;
  static Fact from_value(const Value& v);
};

struct PresentationVerdict {
  Verdict verdict;
  std::vector<Fact> facts;  // populated only when ok

  bool ok() const noexcept { return verdict.ok(); }
};

/// Ok iff the credential passes verify_full, every opening and predicate
/// recomputes to claims_root, every witness lands on its anchor, groups are
/// complete, the holder signature binds subject, nonce and verifier, and the
/// nonce is fresh. Consumes the nonce on success.
PresentationVerdict verify_presentation(const Presentation& p, const RegistryView& registry,
                                        const Nonce& expected_nonce, const Did& expected_verifier, Instant now,
                                        NonceCache& nonces);

}  // namespace vsc
