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
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vsc/exchange.hpp"
#include "vsc/identity.hpp"
#include "vsc/net.hpp"

namespace vsc {

// Bank-side "additional customer care and support" markers. The stored
// kind is always care_support; category names the driver it rests on.

inline constexpr std::string_view kCareSupport = "care_support";
inline constexpr int kReviewMonths = 12;
inline constexpr int kArrearsMonths = 3;

enum class FlagSource { Presentation, AgentManual };
enum class FlagState { Active, Resolved, Erased };

std::string_view flag_source_name(FlagSource s) noexcept;
std::string_view flag_state_name(FlagState s) noexcept;

struct CareFlag {
  std::string flag_id;
  std::string customer_ref;
  std::string category;  // one of kDriverClaims; empty once erased
  FlagSource source = FlagSource::Presentation;
  std::optional<std::string> request_id;  // presentation the evidence came from
  std::vector<Fact> evidence;
  std::optional<std::string> note;  // agent's note on manual flags
  Instant created_at;
  Instant cycle_start;  // start of the current 12-month review cycle
  Instant review_due;
  std::optional<Instant> arrears_monitoring;
  FlagState state = FlagState::Active;
  std::optional<Hash32> tombstone;

  Value to_value() const;
  static CareFlag from_value(const Value& v);
};

struct StoredPresentation {
  std::string request_id;
  std::string customer_ref;
  Instant received_at;
  std::vector<Fact> facts;
  Value presentation;  // as received

  Value to_value() const;
  static StoredPresentation from_value(const Value& v);
};

struct CustomerRecord {
  std::string customer_ref;
  Did holder;

  Value to_value() const;
  static CustomerRecord from_value(const Value& v);
};

enum class ReviewAction { ReviewDue, MonitorDue };
std::string_view review_action_name(ReviewAction a) noexcept;

struct ReviewItem {
  CareFlag flag;
  ReviewAction action;
};

/// {"actions":[{"action","flag"}],"now"}
Value review_report(const std::vector<ReviewItem>& items, Instant now);

/// What an agent does with a due item.
enum class FlagDecision { Renew, Resolve, MonitorNext, EndArrears };
std::optional<FlagDecision> parse_flag_decision(std::string_view s) noexcept;

struct ErasureReport {
  std::size_t flags = 0;
  std::size_t presentations = 0;

  Value to_value() const;
};

/// Customers, flags and stored presentations. Mutations are serialized.
/// With a directory: snapshot.json (naming the current journal epoch N)
/// plus an append-only journal-N.log of upserts since the snapshot.
/// Erasure writes a new snapshot with epoch N+1 and deletes journal-N.log,
/// so erased bytes survive in neither file; a crash in between leaves a
/// stale journal that load() ignores and removes.
class BankStore {
 public:
  explicit BankStore(std::optional<std::filesystem::path> dir = std::nullopt);

  void upsert_customer(const CustomerRecord& c);
  std::optional<CustomerRecord> customer(const std::string& ref) const;

  /// One ACTIVE flag per driver fact proven true. An ACTIVE flag of the same
  /// category is updated in place: new evidence, review clock restarted.
  /// Outcomes that are not verified Ok change nothing.
  std::vector<CareFlag> apply_flags(const VerificationOutcome& outcome, Instant now);
  void store_presentation(const StoredPresentation& p);

  /// Errors: UnknownCustomer, InvalidArgument (category).
  CareFlag add_manual_flag(const std::string& customer_ref, const std::string& category, std::string note,
                           Instant now);
  /// Starts 3-monthly arrears monitoring. Errors: NotFound, InvalidArgument.
  CareFlag mark_arrears(const std::string& flag_id, Instant now);

  /// ACTIVE flags with review_due <= now, and with arrears checks due.
  std::vector<ReviewItem> run_review(Instant now) const;
  /// Errors: NotFound, InvalidArgument (flag not active or not due).
  CareFlag act(const std::string& flag_id, FlagDecision decision, Instant now);

  /// Errors: UnknownCustomer.
  std::vector<CareFlag> flags(const std::string& customer_ref) const;
  std::vector<StoredPresentation> presentations(const std::string& customer_ref) const;

  /// Erases every flag (to tombstones) and presentation of the customer.
  /// Idempotent. Errors: UnknownCustomer.
  ErasureReport forget_customer(const std::string& customer_ref, Instant now);

  static constexpr const char* kSnapshotFile = "snapshot.json";
  std::optional<std::filesystem::path> journal_path() const;

 private:
  void log(const Value& event);
  void load();
  void write_snapshot();
  CareFlag& active_flag(const std::string& flag_id);

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mu_;
  std::map<std::string, CustomerRecord> customers_;
  std::map<std::string, CareFlag> flags_;  // by flag_id
  std::vector<StoredPresentation> presentations_;
  std::int64_t epoch_ = 0;
};

/// Customer-signed erasure request.
struct ForgetRequest {
  std::string customer_ref;
  Instant timestamp;
  Nonce nonce{};
  Signature signature{};

  Value body_value() const;
  Value to_value() const;
  static ForgetRequest from_value(const Value& v);
  static ForgetRequest make(std::string customer_ref, const KeyPair& holder_keys, Instant now);
};

class BankService {
 public:
  /// With `dir`, the verifier key is `<dir>/bank.key` and the store lives
  /// in the same directory. The bank DID is anchored if needed.
  BankService(RegistryClient& registry, std::optional<std::filesystem::path> dir, Clock clock = system_clock(),
              std::optional<KeyPair> keys = std::nullopt);

  const Did& did() const noexcept { return did_; }
  BankStore& store() noexcept { return store_; }

  /// Where holders post responses: `<public_url>/present/response`.
  void set_public_url(const std::string& url);

  void register_customer(const std::string& customer_ref, const Did& holder);
  /// Sends a request to the customer's holder endpoint (from the holder's
  /// DID document). Errors: UnknownCustomer, EndpointUnreachable,
  /// InvalidShape.
  PresentationRequest open_exchange(const std::string& customer_ref, const ScenarioSpec& spec);
  /// Verifies, then stores the presentation and applies flags when Ok.
  /// Errors: UnknownRequest, RequestExpired, AlreadyDecided.
  VerificationOutcome receive(const PresentationResponse& response);

  /// Errors: Unauthorized, UnknownCustomer.
  ErasureReport handle_forget(const ForgetRequest& req);

  /// Protocol: POST /present/response. Agent routes (bearer token, or
  /// loopback when no token is set): POST /exchange/open,
  /// GET /flags/{customer}, POST /flags/review, POST /flags/act,
  /// POST /flags/manual, POST /flags/arrears. POST /forget/{customer}
  /// accepts an agent or a customer-signed ForgetRequest.
  void mount(HttpServer& server, std::optional<std::string> admin_token = std::nullopt);

  static constexpr const char* kKeyFile = "bank.key";

 private:
  RegistryClient& registry_;
  Clock clock_;
  KeyPair keys_;
  Did did_;
  BankStore store_;
  NonceCache nonces_;
  NonceCache forget_nonces_;
  std::unique_ptr<VerifierExchange> exchange_;
  std::string public_url_ = "http://127.0.0.1:0";
};

}  // namespace vsc
