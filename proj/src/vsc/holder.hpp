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

#include <condition_variable>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "vsc/exchange.hpp"
#include "vsc/identity.hpp"
#include "vsc/issuer.hpp"
#include "vsc/net.hpp"

namespace vsc {

struct CachedStatus {
  std::string verdict;  // "Ok" or a FailReason name
  Instant checked_at;
  /// Set when the last refresh could not reach the registry.
  std::optional<Instant> stale_since;

  Value to_value() const;
  static CachedStatus from_value(const Value& v);
};

struct WalletEntry {
  VerifiableCredential credential;
  HolderSecrets secrets;
  std::string label;
  Instant received_at;
  std::optional<CachedStatus> last_status;

  /// Envelope, label, claim names and values, status. Never salts or seeds.
  Value public_view() const;
};

/// {"holder","credentials":[public_view...]}
Value wallet_view(const Did& holder, const std::vector<WalletEntry>& entries);

enum class InboxState { Pending, Presented, Denied, Expired };
std::string_view inbox_state_name(InboxState s) noexcept;

struct InboxItem {
  PresentationRequest request;
  Instant received_at;
  InboxState state = InboxState::Pending;

  Value to_value() const;
  static InboxItem from_value(const Value& v);
};

/// One line of the disclosure history, written before the response is
/// sent. Entries are hash-chained: `hash` covers the entry body and the
/// previous entry's hash.
struct AuditEntry {
  std::int64_t seq = 0;
  Instant at;
  std::string request_id;
  Did verifier;
  std::string purpose;
  Outcome outcome = Outcome::Denied;
  std::string reason;                // "consent", "user-denied", "expired" or a local error name
  std::vector<std::string> shared;   // claims opened or proven
  std::optional<std::string> credential_id;
  Hash32 prev_hash{};
  Hash32 hash{};

  Value body_value() const;
  Value to_value() const;
  static AuditEntry from_value(const Value& v);
};

struct DecisionResult {
  PresentationResponse response;
  std::optional<Error> local_error;
  std::vector<std::string> shared;
  bool delivered = false;
  std::optional<Value> verifier_reply;

  /// For the local API: no presentation body, only what was shared.
  Value to_value() const;
};

/// The holder's agent. All state lives in one wallet file encrypted with a
/// passphrase-derived key (Argon2id; XChaCha20-Poly1305). The KDF salt and
/// parameters travel in the file's cleartext header, which is also bound as
/// associated data.
class HolderAgent {
 public:
  /// Creates a new wallet with a fresh holder key and anchors its DID.
  /// Fails with InvalidArgument if the file exists.
  static std::unique_ptr<HolderAgent> create(const std::filesystem::path& file, const std::string& passphrase,
                                             RegistryClient& registry, Clock clock = system_clock(),
                                             KdfParams kdf = KdfParams::interactive());
  /// Errors: NotFound, WrongPassphrase, Io.
  static std::unique_ptr<HolderAgent> open(const std::filesystem::path& file, const std::string& passphrase,
                                           RegistryClient& registry, Clock clock = system_clock());

  ~HolderAgent();
  HolderAgent(const HolderAgent&) = delete;
  HolderAgent& operator=(const HolderAgent&) = delete;

  const Did& did() const noexcept { return identity_.did; }

  /// Points the DID document at `url`, where POST /present/request lands.
  void publish_endpoint(const std::string& url);

  /// Latest wins for a repeated credential_id (returns true when replaced).
  /// Errors: RootMismatch, MalformedValue.
  bool store_credential(const VerifiableCredential& vc, const HolderSecrets& secrets, std::string label = "");
  /// Signed request to an issuer's POST /issue; stores both credentials.
  IssuedPair fetch_from_issuer(const std::string& issuer_url, const std::string& nhs_number);

  std::vector<WalletEntry> entries() const;

  /// Queues a verifier request. A repeated request_id is ignored.
  /// Errors: InvalidShape.
  void receive_request(const PresentationRequest& req);
  std::vector<InboxItem> inbox();

  /// Applies the decision and posts the response to the verifier.
  /// Errors: UnknownRequest, AlreadyDecided, RequestExpired (a DENIED is
  /// still sent). A failed delivery is reported via `delivered`.
  DecisionResult decide(const ConsentDecision& decision);

  /// Auto-denies pending requests whose expiry has passed. Returns how many.
  std::size_t expire_pending();
  /// Runs expire_pending() every `period` until stop_expiry_timer().
  void start_expiry_timer(std::chrono::milliseconds period);
  void stop_expiry_timer();

  /// Re-checks every entry against the registry. On RegistryUnreachable the
  /// cached verdicts are kept, stamped stale, and the error is rethrown.
  std::vector<WalletEntry> status_refresh();

  std::vector<AuditEntry> audit() const;
  /// True iff the audit hash chain recomputes.
  bool audit_chain_valid() const;

  /// Remote: POST /present/request. Loopback only: GET /wallet, GET /inbox,
  /// POST /inbox/{id}/decide, POST /wallet/refresh, GET /audit.
  void mount(HttpServer& server);

 private:
  HolderAgent(std::filesystem::path file, RegistryClient& registry, Clock clock);

  void save_locked();
  Value plaintext_locked() const;
  void load_plaintext(const Value& v);
  void append_audit_locked(AuditEntry e);
  std::vector<HeldCredential> held_locked() const;

  std::filesystem::path file_;
  RegistryClient& registry_;
  Clock clock_;
  KdfParams kdf_;
  KdfSalt salt_{};
  SecretKey key_{};
  HolderIdentity identity_;

  mutable std::mutex mu_;        // state below and the file
  std::mutex decide_mu_;         // one decision at a time
  std::vector<WalletEntry> entries_;
  std::vector<InboxItem> inbox_;
  std::vector<AuditEntry> audit_;

  std::mutex timer_mu_;
  std::condition_variable timer_cv_;
  bool timer_stop_ = false;
  std::thread timer_;
};

}  // namespace vsc
