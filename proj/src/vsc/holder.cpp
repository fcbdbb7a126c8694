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

#include "vsc/holder.hpp"

#include <algorithm>

#include "vsc/storage.hpp"

namespace vsc {

namespace {

constexpr std::string_view kWalletFormat = "vsc-wallet/1";
constexpr std::string_view kKdfName = "Argon2id";
constexpr std::string_view kAeadName = "XChaCha20-Poly1305";

Value strings_value(const std::vector<std::string>& v) {
  Value::List l;
  for (const auto& s : v) l.push_back(s);
  return l;
}

std::vector<std::string> strings_from(const Value& v) {
  std::vector<std::string> out;
  for (const auto& s : v.as_list()) out.push_back(s.as_text());
  return out;
}

Outcome parse_outcome(const std::string& s) {
  if (s == "PRESENTED") return Outcome::Presented;
  if (s == "DENIED") return Outcome::Denied;
  fail(Errc::MalformedValue, "unknown outcome " + s);
}

}  // namespace

// ------------------------------------------------------------- wire types

Value CachedStatus::to_value() const {
  Value::Map m{{"verdict", verdict}, {"checked_at", encode_instant(checked_at)}};
  if (stale_since) m["stale_since"] = encode_instant(*stale_since);
  return m;
}

CachedStatus CachedStatus::from_value(const Value& v) {
  expect_keys(v, {"verdict", "checked_at"}, {"stale_since"});
  CachedStatus s{v.at("verdict").as_text(), decode_instant(v.at("checked_at")), std::nullopt};
  if (auto x = v.find("stale_since")) s.stale_since = decode_instant(*x);
  return s;
}

Value WalletEntry::public_view() const {
  Value::Map claims;
  for (const auto& c : secrets.claims) claims[c.name] = c.value;
  Value::Map m{{"credential_id", credential.credential_id},
               {"schema", credential.schema},
               {"issuer", credential.issuer.str()},
               {"subject", credential.subject.str()},
               {"issued_at", encode_instant(credential.issued_at)},
               {"expires_at", encode_instant(credential.expires_at)},
               {"label", label},
               {"received_at", encode_instant(received_at)},
               {"claims", std::move(claims)}};
  if (last_status) m["status"] = last_status->to_value();
  return m;
}

std::string_view inbox_state_name(InboxState s) noexcept {
  switch (s) {
    case InboxState::Pending: return "PENDING";
    case InboxState::Presented: return "PRESENTED";
    case InboxState::Denied: return "DENIED";
    case InboxState::Expired: return "EXPIRED";
  }
  return "?";
}

Value InboxItem::to_value() const {
  return Value::Map{
      {"request", request.to_value()}, {"received_at", encode_instant(received_at)}, {"state", inbox_state_name(state)}};
}

InboxItem InboxItem::from_value(const Value& v) {
  expect_keys(v, {"request", "received_at", "state"});
  InboxItem i{PresentationRequest::from_value(v.at("request")), decode_instant(v.at("received_at"))};
  const auto& s = v.at("state").as_text();
  if (s == "PENDING") {
    i.state = InboxState::Pending;
  } else if (s == "PRESENTED") {
    i.state = InboxState::Presented;
  } else if (s == "DENIED") {
    i.state = InboxState::Denied;
  } else if (s == "EXPIRED") {
    i.state = InboxState::Expired;
  } else {
    fail(Errc::MalformedValue, "unknown inbox state " + s);
  }
  return i;
}

Value AuditEntry::body_value() const {
  Value::Map m{{"seq", seq},
               {"at", encode_instant(at)},
               {"request_id", request_id},
               {"verifier", verifier.str()},
               {"purpose", purpose},
               {"outcome", outcome_name(outcome)},
               {"reason", reason},
               {"shared", strings_value(shared)}};
  if (credential_id) m["credential_id"] = *credential_id;
  return m;
}

Value AuditEntry::to_value() const {
  auto m = body_value().as_map();
  m["prev_hash"] = encode_bytes(prev_hash);
  m["hash"] = encode_bytes(hash);
  return m;
}

AuditEntry AuditEntry::from_value(const Value& v) {
  expect_keys(v, {"seq", "at", "request_id", "verifier", "purpose", "outcome", "reason", "shared", "prev_hash", "hash"},
              {"credential_id"});
  AuditEntry e;
  e.seq = v.at("seq").as_int();
  e.at = decode_instant(v.at("at"));
  e.request_id = v.at("request_id").as_text();
  e.verifier = Did::parse(v.at("verifier").as_text());
  e.purpose = v.at("purpose").as_text();
  e.outcome = parse_outcome(v.at("outcome").as_text());
  e.reason = v.at("reason").as_text();
  e.shared = strings_from(v.at("shared"));
  if (auto x = v.find("credential_id")) e.credential_id = x->as_text();
  e.prev_hash = decode_array<32>(v.at("prev_hash"));
  e.hash = decode_array<32>(v.at("hash"));
  return e;
}

namespace {

Hash32 audit_hash(const AuditEntry& e) {
  Bytes b(e.prev_hash.begin(), e.prev_hash.end());
  append(b, canonicalize(e.body_value()));
  return digest(b);
}

}  // namespace

Value DecisionResult::to_value() const {
  Value::Map m{{"request_id", response.request_id},
               {"outcome", outcome_name(response.outcome)},
               {"shared", strings_value(shared)},
               {"delivered", delivered}};
  if (local_error) m["local_error"] = errc_name(local_error->code());
  if (verifier_reply) m["verifier_reply"] = *verifier_reply;
  return m;
}

// ------------------------------------------------------------ wallet file

HolderAgent::HolderAgent(std::filesystem::path file, RegistryClient& registry, Clock clock)
    : file_(std::move(file)), registry_(registry), clock_(std::move(clock)) {}

HolderAgent::~HolderAgent() {
  stop_expiry_timer();
  secure_wipe(key_);
  secure_wipe(identity_.keys.secret);
}

std::unique_ptr<HolderAgent> HolderAgent::create(const std::filesystem::path& file, const std::string& passphrase,
                                                 RegistryClient& registry, Clock clock, KdfParams kdf) {
  if (std::filesystem::exists(file)) fail(Errc::InvalidArgument, "wallet already exists: " + file.string());
  std::unique_ptr<HolderAgent> a(new HolderAgent(file, registry, std::move(clock)));
  a->identity_.keys = KeyPair::generate();
  a->identity_.did = anchor_identity(a->identity_.keys, std::nullopt, registry);
  a->kdf_ = kdf;
  a->salt_ = random_array<16>();
  a->key_ = derive_key(passphrase, a->salt_, kdf);
  std::lock_guard lock(a->mu_);
  a->save_locked();
  return a;
}

std::unique_ptr<HolderAgent> HolderAgent::open(const std::filesystem::path& file, const std::string& passphrase,
                                               RegistryClient& registry, Clock clock) {
  auto text = read_file(file);
  if (!text) fail(Errc::NotFound, "no wallet at " + file.string());
  std::unique_ptr<HolderAgent> a(new HolderAgent(file, registry, std::move(clock)));
  Value header, sealed;
  try {
    sealed = parse(*text);
    expect_keys(sealed, {"format", "kdf", "aead", "nonce", "ciphertext"});
    if (sealed.at("format").as_text() != kWalletFormat) fail(Errc::MalformedValue, "unknown wallet format");
    if (sealed.at("aead").as_text() != kAeadName) fail(Errc::MalformedValue, "unknown wallet cipher");
    const auto& kdf = sealed.at("kdf");
    expect_keys(kdf, {"alg", "opslimit", "memlimit", "salt"});
    if (kdf.at("alg").as_text() != kKdfName) fail(Errc::MalformedValue, "unknown key derivation");
    a->kdf_ = {static_cast<std::uint64_t>(kdf.at("opslimit").as_int()),
               static_cast<std::uint64_t>(kdf.at("memlimit").as_int())};
    a->salt_ = decode_array<16>(kdf.at("salt"));
    header = Value::Map{{"format", sealed.at("format")}, {"kdf", kdf}, {"aead", sealed.at("aead")}};
  } catch (const Error& e) {
    fail(Errc::Io, "corrupt wallet header: " + std::string(e.what()));
  }
  a->key_ = derive_key(passphrase, a->salt_, a->kdf_);
  const auto nonce = decode_array<24>(sealed.at("nonce"));
  auto plain = aead_open(a->key_, nonce, decode_bytes(sealed.at("ciphertext")), as_bytes(canonicalize(header)));
  if (!plain) fail(Errc::WrongPassphrase, "wallet does not decrypt with this passphrase");
  try {
    a->load_plaintext(parse(ByteView(*plain)));
  } catch (const Error& e) {
    secure_wipe(*plain);
    fail(Errc::Io, "corrupt wallet contents: " + std::string(e.what()));
  }
  secure_wipe(*plain);
  return a;
}

Value HolderAgent::plaintext_locked() const {
  Value::List entries, inbox, audit;
  for (const auto& e : entries_) {
    Value::Map m{{"credential", e.credential.to_value()},
                 {"secrets", e.secrets.to_value()},
                 {"label", e.label},
                 {"received_at", encode_instant(e.received_at)}};
    if (e.last_status) m["last_status"] = e.last_status->to_value();
    entries.push_back(std::move(m));
  }
  for (const auto& i : inbox_) inbox.push_back(i.to_value());
  for (const auto& a : audit_) audit.push_back(a.to_value());
  return Value::Map{{"holder", Value::Map{{"did", identity_.did.str()}, {"seed", encode_bytes(identity_.keys.secret)}}},
                    {"entries", std::move(entries)},
                    {"inbox", std::move(inbox)},
                    {"audit", std::move(audit)}};
}

void HolderAgent::load_plaintext(const Value& v) {
  expect_keys(v, {"holder", "entries", "inbox", "audit"});
  const auto& h = v.at("holder");
  expect_keys(h, {"did", "seed"});
  identity_.keys = KeyPair::from_seed(decode_array<32>(h.at("seed")));
  identity_.did = Did::parse(h.at("did").as_text());
  for (const auto& e : v.at("entries").as_list()) {
    expect_keys(e, {"credential", "secrets", "label", "received_at"}, {"last_status"});
    WalletEntry w{VerifiableCredential::from_value(e.at("credential")), HolderSecrets::from_value(e.at("secrets")),
                  e.at("label").as_text(), decode_instant(e.at("received_at")), std::nullopt};
    if (auto s = e.find("last_status")) w.last_status = CachedStatus::from_value(*s);
    entries_.push_back(std::move(w));
  }
  for (const auto& i : v.at("inbox").as_list()) inbox_.push_back(InboxItem::from_value(i));
  for (const auto& a : v.at("audit").as_list()) audit_.push_back(AuditEntry::from_value(a));
}

void HolderAgent::save_locked() {
  const Value header = Value::Map{
      {"format", kWalletFormat},
      {"kdf", Value::Map{{"alg", kKdfName},
                         {"opslimit", static_cast<std::int64_t>(kdf_.opslimit)},
                         {"memlimit", static_cast<std::int64_t>(kdf_.memlimit)},
                         {"salt", encode_bytes(salt_)}}},
      {"aead", kAeadName}};
  auto plain = canonical_bytes(plaintext_locked());
  const auto nonce = random_array<24>();
  const auto sealed = aead_seal(key_, nonce, plain, as_bytes(canonicalize(header)));
  secure_wipe(plain);
  auto file = header.as_map();
  file["nonce"] = encode_bytes(nonce);
  file["ciphertext"] = encode_bytes(ByteView(sealed));
  write_file_atomic(file_, canonicalize(file), 0600);
}

// ------------------------------------------------------------- operations

void HolderAgent::publish_endpoint(const std::string& url) { anchor_identity(identity_.keys, url, registry_); }

bool HolderAgent::store_credential(const VerifiableCredential& vc, const HolderSecrets& secrets, std::string label) {
  if (secrets.credential_id != vc.credential_id) fail(Errc::RootMismatch, "secrets belong to another credential");
  if (secrets.root() != vc.claims_root) fail(Errc::RootMismatch, "secrets do not recompute the claims root");
  if (label.empty()) label = vc.schema;
  std::lock_guard lock(mu_);
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const WalletEntry& e) { return e.credential.credential_id == vc.credential_id; });
  WalletEntry entry{vc, secrets, std::move(label), clock_(), std::nullopt};
  const bool replaced = it != entries_.end();
  if (replaced) {
    *it = std::move(entry);
  } else {
    entries_.push_back(std::move(entry));
  }
  save_locked();
  return replaced;
}

IssuedPair HolderAgent::fetch_from_issuer(const std::string& issuer_url, const std::string& nhs_number) {
  auto base = issuer_url;
  while (base.ends_with('/')) base.pop_back();
  const auto req = IssueRequest::make(identity_.did, identity_.keys, nhs_number, clock_());
  auto pair = IssuedPair::from_value(expect_ok(http_post(base + "/issue", canonicalize(req.to_value()))));
  for (const auto* c : {&pair.full, &pair.fairness}) {
    if (c->credential.subject != identity_.did) fail(Errc::MalformedPayload, "issuer returned another subject's credential");
  }
  store_credential(pair.full.credential, pair.full.secrets, "NHS vulnerability assessment");
  store_credential(pair.fairness.credential, pair.fairness.secrets, "Fairness for All");
  return pair;
}

std::vector<WalletEntry> HolderAgent::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::vector<HeldCredential> HolderAgent::held_locked() const {
  std::vector<HeldCredential> out;
  for (const auto& e : entries_) out.push_back({e.credential, e.secrets});
  return out;
}

void HolderAgent::receive_request(const PresentationRequest& req) {
  req.check_shape();
  Url::parse(req.verifier_endpoint);
  std::lock_guard lock(mu_);
  for (const auto& i : inbox_) {
    if (i.request.request_id == req.request_id) return;
  }
  inbox_.push_back({req, clock_(), InboxState::Pending});
  save_locked();
}

std::vector<InboxItem> HolderAgent::inbox() {
  expire_pending();
  std::lock_guard lock(mu_);
  return inbox_;
}

void HolderAgent::append_audit_locked(AuditEntry e) {
  e.seq = static_cast<std::int64_t>(audit_.size());
  e.prev_hash = audit_.empty() ? Hash32{} : audit_.back().hash;
  e.hash = audit_hash(e);
  audit_.push_back(std::move(e));
}

namespace {

std::optional<Value> post_response(const PresentationRequest& req, const PresentationResponse& resp, bool& delivered) {
  try {
    auto reply = expect_ok(http_post(req.verifier_endpoint, canonicalize(resp.to_value())));
    delivered = true;
    return reply;
  } catch (const Error& e) {
    delivered = false;
    return Value::Map{{"error", errc_name(e.code())}, {"message", e.what()}};
  }
}

}  // namespace

DecisionResult HolderAgent::decide(const ConsentDecision& decision) {
  std::lock_guard serial(decide_mu_);
  const Instant now = clock_();
  PresentationRequest req;
  std::vector<HeldCredential> held;
  {
    std::lock_guard lock(mu_);
    auto it = std::find_if(inbox_.begin(), inbox_.end(),
                           [&](const InboxItem& i) { return i.request.request_id == decision.request_id; });
    if (it == inbox_.end()) fail(Errc::UnknownRequest, decision.request_id);
    if (it->state != InboxState::Pending) fail(Errc::AlreadyDecided, decision.request_id);
    req = it->request;
    if (now >= req.expires_at) {
      it->state = InboxState::Expired;
      append_audit_locked({0, now, req.request_id, req.verifier, req.purpose, Outcome::Denied, "expired", {}, {}});
      save_locked();
    } else {
      held = held_locked();
    }
  }
  if (now >= req.expires_at) {
    bool delivered = false;
    post_response(req, PresentationResponse::denied(req.request_id), delivered);
    fail(Errc::RequestExpired, decision.request_id);
  }

  auto consent = decision;
  consent.decided_at = now;
  const auto handled = handle_request(req, held, identity_, consent, now);
  DecisionResult result{handled.response, handled.local_error, handled.shared, false, std::nullopt};
  {
    std::lock_guard lock(mu_);
    auto it = std::find_if(inbox_.begin(), inbox_.end(),
                           [&](const InboxItem& i) { return i.request.request_id == req.request_id; });
    it->state = handled.response.outcome == Outcome::Presented ? InboxState::Presented : InboxState::Denied;
    std::string reason = "consent";
    if (handled.local_error) {
      reason = errc_name(handled.local_error->code());
    } else if (handled.response.outcome == Outcome::Denied) {
      reason = "user-denied";
    }
    append_audit_locked({0, now, req.request_id, req.verifier, req.purpose, handled.response.outcome, reason,
                         handled.shared, handled.credential_id});
    save_locked();
  }
  result.verifier_reply = post_response(req, handled.response, result.delivered);
  return result;
}

std::size_t HolderAgent::expire_pending() {
  std::lock_guard serial(decide_mu_);
  const Instant now = clock_();
  std::vector<PresentationRequest> expired;
  {
    std::lock_guard lock(mu_);
    for (auto& i : inbox_) {
      if (i.state != InboxState::Pending || now < i.request.expires_at) continue;
      i.state = InboxState::Expired;
      append_audit_locked(
          {0, now, i.request.request_id, i.request.verifier, i.request.purpose, Outcome::Denied, "expired", {}, {}});
      expired.push_back(i.request);
    }
    if (!expired.empty()) save_locked();
  }
  for (const auto& r : expired) {
    bool delivered = false;
    post_response(r, PresentationResponse::denied(r.request_id), delivered);
  }
  return expired.size();
}

void HolderAgent::start_expiry_timer(std::chrono::milliseconds period) {
  stop_expiry_timer();
  {
    std::lock_guard lock(timer_mu_);
    timer_stop_ = false;
  }
  timer_ = std::thread([this, period] {
    std::unique_lock lock(timer_mu_);
    while (!timer_cv_.wait_for(lock, period, [this] { return timer_stop_; })) {
      lock.unlock();
      try {
        expire_pending();
      } catch (const std::exception&) {
        // keep ticking; the next pass retries
      }
      lock.lock();
    }
  });
}

void HolderAgent::stop_expiry_timer() {
  {
    std::lock_guard lock(timer_mu_);
    timer_stop_ = true;
  }
  timer_cv_.notify_all();
  if (timer_.joinable()) timer_.join();
}

std::vector<WalletEntry> HolderAgent::status_refresh() {
  std::vector<VerifiableCredential> creds;
  {
    std::lock_guard lock(mu_);
    for (const auto& e : entries_) creds.push_back(e.credential);
  }
  const Instant now = clock_();
  std::map<std::string, std::string> verdicts;
  std::optional<Error> unreachable;
  for (const auto& vc : creds) {
    try {
      verdicts[vc.credential_id] = verify_full(vc, registry_, now).str();
    } catch (const Error& e) {
      if (e.code() != Errc::RegistryUnreachable) throw;
      unreachable = e;
      break;
    }
  }
  std::lock_guard lock(mu_);
  for (auto& e : entries_) {
    if (unreachable) {
      if (!e.last_status) e.last_status = CachedStatus{"Unknown", now, now};
      if (!e.last_status->stale_since) e.last_status->stale_since = now;
    } else if (auto it = verdicts.find(e.credential.credential_id); it != verdicts.end()) {
      e.last_status = CachedStatus{it->second, now, std::nullopt};
    }
  }
  save_locked();
  if (unreachable) throw *unreachable;
  return entries_;
}

std::vector<AuditEntry> HolderAgent::audit() const {
  std::lock_guard lock(mu_);
  return audit_;
}

bool HolderAgent::audit_chain_valid() const {
  std::lock_guard lock(mu_);
  Hash32 prev{};
  for (std::size_t i = 0; i < audit_.size(); ++i) {
    const auto& e = audit_[i];
    if (e.seq != static_cast<std::int64_t>(i) || e.prev_hash != prev || audit_hash(e) != e.hash) return false;
    prev = e.hash;
  }
  return true;
}

// ------------------------------------------------------------------- HTTP

Value wallet_view(const Did& holder, const std::vector<WalletEntry>& entries) {
  Value::List l;
  for (const auto& e : entries) l.push_back(e.public_view());
  return Value::Map{{"holder", holder.str()}, {"credentials", std::move(l)}};
}

void HolderAgent::mount(HttpServer& server) {
  const auto local = [](const HttpRequest& r) {
    if (!r.from_loopback()) fail(Errc::Unauthorized, "the consent API is loopback-only");
  };
  server.post("/present/request", [this](const HttpRequest& r) {
    PresentationRequest req;
    try {
      req = PresentationRequest::from_value(r.json());
    } catch (const Error& e) {
      fail(Errc::MalformedPayload, e.what());
    }
    receive_request(req);
    return HttpResponse::json(Value::Map{{"received", req.request_id}});
  });
  server.get("/wallet", [this, local](const HttpRequest& r) {
    local(r);
    return HttpResponse::json(wallet_view(did(), entries()));
  });
  server.get("/inbox", [this, local](const HttpRequest& r) {
    local(r);
    Value::List l;
    for (const auto& i : inbox()) l.push_back(i.to_value());
    return HttpResponse::json(Value::Map{{"items", std::move(l)}});
  });
  server.post(R"(/inbox/([^/]+)/decide)", [this, local](const HttpRequest& r) {
    local(r);
    const Value body = r.json();
    expect_keys(body, {"decision"}, {"granted"});
    ConsentDecision d;
    d.request_id = r.matches.at(1);
    d.kind = parse_consent_kind(body.at("decision").as_text());
    if (auto g = body.find("granted")) {
      for (const auto& i : g->as_list()) {
        if (i.as_int() < 0) fail(Errc::InvalidArgument, "granted indices must be non-negative");
        d.granted.push_back(static_cast<std::size_t>(i.as_int()));
      }
    }
    return HttpResponse::json(decide(d).to_value());
  });
  server.post("/wallet/refresh", [this, local](const HttpRequest& r) {
    local(r);
    return HttpResponse::json(wallet_view(did(), status_refresh()));
  });
  server.get("/audit", [this, local](const HttpRequest& r) {
    local(r);
    Value::List l;
    for (const auto& a : audit()) l.push_back(a.to_value());
    return HttpResponse::json(Value::Map{{"entries", std::move(l)}, {"chain_valid", audit_chain_valid()}});
  });
}

}  // namespace vsc
