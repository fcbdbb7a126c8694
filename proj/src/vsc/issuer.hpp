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
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vsc/disclosure.hpp"
#include "vsc/identity.hpp"
#include "vsc/net.hpp"

namespace vsc {

/// True iff `nhs` is ten digits whose last digit is the mod-11 check digit
/// of the first nine (weights 10..2; 11 maps to 0; 10 is never valid).
bool nhs_number_valid(std::string_view nhs) noexcept;

struct SubjectRecord {
  std::string nhs_number;
  Date date_of_birth;
  Date assessment_date;
  std::array<bool, 4> drivers{};  // order of kDriverClaims
  std::int64_t work_incapacity_months = 0;
  std::string detail;
  Did subject_did;

  Value::Map full_values() const;
  Value::Map fairness_values() const;
};

/// Reads a CSV (header row required) or JSON Lines file. Columns / keys:
/// nhs_number, date_of_birth, assessment_date, driver_health,
/// driver_life_events, driver_low_resilience, driver_low_capability,
/// work_incapacity_months, detail, subject_did.
/// Errors carry the 1-based line: ParseError, ChecksumError.
std::vector<SubjectRecord> ingest(const std::filesystem::path& file);
std::vector<SubjectRecord> ingest_csv(std::string_view text);
std::vector<SubjectRecord> ingest_jsonl(std::string_view text);

struct IssuedPair {
  IssuedCredential full;
  IssuedCredential fairness;

  Value to_value() const;
  static IssuedPair from_value(const Value& v);
};

/// Signed issuance request: the subject proves control of its DID.
struct IssueRequest {
  Did subject;
  std::string nhs_number;
  Instant timestamp;
  Nonce nonce{};
  Signature signature{};

  Value body_value() const;
  Value to_value() const;
  static IssueRequest from_value(const Value& v);
  static IssueRequest make(const Did& subject, const KeyPair& keys, std::string nhs_number, Instant now);
};

inline constexpr std::int64_t kIssueRequestSkew = 5 * kMinute;

/// NHS-like issuer. Keeps credential envelopes (never salts or ladder seeds)
/// in memory and, with a state directory, in an append-only journal.
class IssuerService {
 public:
  /// With `state_dir`, the signing key lives in `<state_dir>/issuer.key`
  /// (created on first use) and issuance is journaled to
  /// `<state_dir>/issued.log`. The DID is anchored if not already.
  IssuerService(RegistryClient& registry, std::optional<std::filesystem::path> state_dir, Clock clock = system_clock(),
                std::optional<KeyPair> keys = std::nullopt);

  const Did& did() const noexcept { return did_; }

  void add_records(std::vector<SubjectRecord> records);
  std::optional<SubjectRecord> record_for(const Did& subject) const;

  /// Issues the full and the Fairness for All credential from one record.
  /// Both are journaled in a single append or neither is.
  IssuedPair issue_pair(const SubjectRecord& record);
  /// Authenticated issuance. Errors: Unauthorized, NotFound.
  IssuedPair handle_issue(const IssueRequest& req);

  /// Sets the status bit. Idempotent. Errors: NotFound.
  void revoke_credential(const std::string& credential_id);

  struct IssuedInfo {
    VerifiableCredential credential;
    bool revoked = false;
  };
  std::vector<IssuedInfo> issued() const;

  /// POST /issue, POST /admin/revoke, GET /admin/issued. Admin routes need
  /// `Authorization: Bearer <admin_token>` when a token is set, otherwise a
  /// loopback client.
  void mount(HttpServer& server, std::optional<std::string> admin_token = std::nullopt);

  static constexpr const char* kKeyFile = "issuer.key";
  static constexpr const char* kJournalFile = "issued.log";

 private:
  void journal(const Value& record);
  void replay_journal();

  RegistryClient& registry_;
  std::optional<std::filesystem::path> state_dir_;
  Clock clock_;
  KeyPair keys_;
  Did did_;
  StatusAllocator slots_;
  NonceCache request_nonces_;

  mutable std::mutex mu_;  // records_, issued_, journal file
  std::map<Did, SubjectRecord> records_;
  std::map<std::string, IssuedInfo> issued_;
};

}  // namespace vsc
