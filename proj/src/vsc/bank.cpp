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

#include "vsc/bank.hpp"

#include <algorithm>

#include "vsc/storage.hpp"

namespace vsc {

std::string_view flag_source_name(FlagSource s) noexcept {
  return s == FlagSource::Presentation ? "PRESENTATION" : "AGENT_MANUAL";
}

std::string_view flag_state_name(FlagState s) noexcept {
  switch (s) {
    case FlagState::Active: return "ACTIVE";
    case FlagState::Resolved: return "RESOLVED";
    case FlagState::Erased: return "ERASED";
  }
  return "?";
}

std::string_view review_action_name(ReviewAction a) noexcept {
  return a == ReviewAction::ReviewDue ? "REVIEW_DUE" : "MONITOR_DUE";
}

Value review_report(const std::vector<ReviewItem>& items, Instant now) {
  Value::List l;
  for (const auto& item : items) {
    l.push_back(Value::Map{{"action", review_action_name(item.action)}, {"flag", item.flag.to_value()}});
  }
  return Value::Map{{"actions", std::move(l)}, {"now", encode_instant(now)}};
}

std::optional<FlagDecision> parse_flag_decision(std::string_view s) noexcept {
  if (s == "RENEW") return FlagDecision::Renew;
  if (s == "RESOLVE") return FlagDecision::Resolve;
  if (s == "MONITOR_NEXT") return FlagDecision::MonitorNext;
  if (s == "END_ARREARS") return FlagDecision::EndArrears;
  return std::nullopt;
}

namespace {

bool is_driver(std::string_view claim) {
  return std::find(kDriverClaims.begin(), kDriverClaims.end(), claim) != kDriverClaims.end();
}

Value facts_value(const std::vector<Fact>& facts) {
  Value::List l;
  for (const auto& f : facts) l.push_back(f.to_value());
  return l;
}

std::vector<Fact> facts_from(const Value& v) {
  std::vector<Fact> out;
  for (const auto& f : v.as_list()) out.push_back(Fact::from_value(f));
  return out;
}

}  // namespace

// ------------------------------------------------------------- wire types

Value CareFlag::to_value() const {
  Value::Map m{{"flag_id", flag_id},
               {"customer_ref", customer_ref},
               {"kind", kCareSupport},
               {"state", flag_state_name(state)}};
  if (state == FlagState::Erased) {
    m["tombstone"] = encode_bytes(tombstone.value_or(Hash32{}));
    return m;
  }
  m["category"] = category;
  m["source"] = flag_source_name(source);
  m["evidence"] = facts_value(evidence);
  m["created_at"] = encode_instant(created_at);
  m["cycle_start"] = encode_instant(cycle_start);
  m["review_due"] = encode_instant(review_due);
  if (request_id) m["request_id"] = *request_id;
  if (note) m["note"] = *note;
  if (arrears_monitoring) m["arrears_monitoring"] = encode_instant(*arrears_monitoring);
  return m;
}

CareFlag CareFlag::from_value(const Value& v) {
  CareFlag f;
  const auto& state = v.at("state").as_text();
  if (v.at("kind").as_text() != kCareSupport) fail(Errc::MalformedValue, "unknown flag kind");
  if (state == "ERASED") {
    expect_keys(v, {"flag_id", "customer_ref", "kind", "state", "tombstone"});
    f.flag_id = v.at("flag_id").as_text();
    f.customer_ref = v.at("customer_ref").as_text();
    f.state = FlagState::Erased;
    f.tombstone = decode_array<32>(v.at("tombstone"));
    return f;
  }
  expect_keys(v,
              {"flag_id", "customer_ref", "kind", "state", "category", "source", "evidence", "created_at",
               "cycle_start", "review_due"},
              {"request_id", "note", "arrears_monitoring"});
  f.flag_id = v.at("flag_id").as_text();
  f.customer_ref = v.at("customer_ref").as_text();
  if (state == "ACTIVE") {
    f.state = FlagState::Active;
  } else if (state == "RESOLVED") {
    f.state = FlagState::Resolved;
  } else {
    fail(Errc::MalformedValue, "unknown flag state " + state);
  }
  f.category = v.at("category").as_text();
  if (!is_driver(f.category)) fail(Errc::MalformedValue, "unknown flag category " + f.category);
  const auto& source = v.at("source").as_text();
  if (source == "PRESENTATION") {
    f.source = FlagSource::Presentation;
  } else if (source == "AGENT_MANUAL") {
    f.source = FlagSource::AgentManual;
  } else {
    fail(Errc::MalformedValue, "unknown flag source " + source);
  }
  f.evidence = facts_from(v.at("evidence"));
  f.created_at = decode_instant(v.at("created_at"));
  f.cycle_start = decode_instant(v.at("cycle_start"));
  f.review_due = decode_instant(v.at("review_due"));
  if (auto x = v.find("request_id")) f.request_id = x->as_text();
  if (auto x = v.find("note")) f.note = x->as_text();
  if (auto x = v.find("arrears_monitoring")) f.arrears_monitoring = decode_instant(*x);
  return f;
}

Value StoredPresentation::to_value() const {
  return Value::Map{{"request_id", request_id},
                    {"customer_ref", customer_ref},
                    {"received_at", encode_instant(received_at)},
                    {"facts", facts_value(facts)},
                    {"presentation", presentation}};
}

StoredPresentation StoredPresentation::from_value(const Value& v) {
  expect_keys(v, {"request_id", "customer_ref", "received_at", "facts", "presentation"});
  return {v.at("request_id").as_text(), v.at("customer_ref").as_text(), decode_instant(v.at("received_at")),
          facts_from(v.at("facts")), v.at("presentation")};
}

Value CustomerRecord::to_value() const { return Value::Map{{"customer_ref", customer_ref}, {"holder", holder.str()}}; }

CustomerRecord CustomerRecord::from_value(const Value& v) {
  expect_keys(v, {"customer_ref", "holder"});
  return {v.at("customer_ref").as_text(), Did::parse(v.at("holder").as_text())};
}

Value ErasureReport::to_value() const {
  return Value::Map{{"flags", static_cast<std::int64_t>(flags)},
                    {"presentations", static_cast<std::int64_t>(presentations)}};
}

// ------------------------------------------------------------------ store

BankStore::BankStore(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
  if (dir_) load();
}

std::optional<std::filesystem::path> BankStore::journal_path() const {
  if (!dir_) return std::nullopt;
  return *dir_ / ("journal-" + std::to_string(epoch_) + ".log");
}

void BankStore::log(const Value& event) {
  if (auto p = journal_path()) append_durable(*p, canonicalize(event) + "\n");
}

void BankStore::load() {
  std::filesystem::create_directories(*dir_);
  if (auto snap = read_file(*dir_ / kSnapshotFile)) {
    const Value v = parse(*snap);
    expect_keys(v, {"epoch", "customers", "flags", "presentations"});
    epoch_ = v.at("epoch").as_int();
    for (const auto& c : v.at("customers").as_list()) {
      auto rec = CustomerRecord::from_value(c);
      customers_[rec.customer_ref] = rec;
    }
    for (const auto& f : v.at("flags").as_list()) {
      auto flag = CareFlag::from_value(f);
      flags_[flag.flag_id] = flag;
    }
    for (const auto& p : v.at("presentations").as_list()) presentations_.push_back(StoredPresentation::from_value(p));
  }
  // Journals from other epochs predate a sealed snapshot.
  const auto current = journal_path()->filename();
  for (const auto& e : std::filesystem::directory_iterator(*dir_)) {
    const auto name = e.path().filename().string();
    if (name.starts_with("journal-") && e.path().filename() != current) std::filesystem::remove(e.path());
  }
  auto text = read_file(*journal_path());
  if (!text) return;
  std::size_t start = 0, line = 0;
  while (start < text->size()) {
    auto end = text->find('\n', start);
    if (end == std::string::npos) break;  // torn final record: never acknowledged
    ++line;
    try {
      const Value ev = parse(std::string_view(*text).substr(start, end - start));
      const auto& kind = ev.at("event").as_text();
      if (kind == "customer") {
        auto c = CustomerRecord::from_value(ev.at("customer"));
        customers_[c.customer_ref] = c;
      } else if (kind == "flag") {
        auto f = CareFlag::from_value(ev.at("flag"));
        flags_[f.flag_id] = f;
      } else if (kind == "presentation") {
        presentations_.push_back(StoredPresentation::from_value(ev.at("presentation")));
      } else {
        fail(Errc::MalformedPayload, "unknown event " + kind);
      }
    } catch (const Error& e) {
      throw Error(Errc::Io, journal_path()->string() + " line " + std::to_string(line) + ": " + e.what(), line);
    }
    start = end + 1;
  }
}

void BankStore::write_snapshot() {
  if (!dir_) return;
  const auto old_journal = *journal_path();
  Value::List customers, flags, presentations;
  for (const auto& [_, c] : customers_) customers.push_back(c.to_value());
  for (const auto& [_, f] : flags_) flags.push_back(f.to_value());
  for (const auto& p : presentations_) presentations.push_back(p.to_value());
  write_file_atomic(*dir_ / kSnapshotFile, canonicalize(Value::Map{{"epoch", epoch_ + 1},
                                                                    {"customers", std::move(customers)},
                                                                    {"flags", std::move(flags)},
                                                                    {"presentations", std::move(presentations)}}));
  ++epoch_;
  std::filesystem::remove(old_journal);
}

void BankStore::upsert_customer(const CustomerRecord& c) {
  std::lock_guard lock(mu_);
  log(Value::Map{{"event", "customer"}, {"customer", c.to_value()}});
  customers_[c.customer_ref] = c;
}

std::optional<CustomerRecord> BankStore::customer(const std::string& ref) const {
  std::lock_guard lock(mu_);
  auto it = customers_.find(ref);
  if (it == customers_.end()) return std::nullopt;
  return it->second;
}

std::vector<CareFlag> BankStore::apply_flags(const VerificationOutcome& outcome, Instant now) {
  std::vector<CareFlag> out;
  if (!outcome.ok()) return out;
  std::lock_guard lock(mu_);
  for (const auto& fact : outcome.facts) {
    if (!is_driver(fact.claim) || !fact.value || *fact.value != Value(true)) continue;
    auto it = std::find_if(flags_.begin(), flags_.end(), [&](const auto& kv) {
      return kv.second.customer_ref == outcome.customer_ref && kv.second.category == fact.claim &&
             kv.second.state == FlagState::Active;
    });
    CareFlag f;
    if (it != flags_.end()) {
      f = it->second;
    } else {
      f.flag_id = random_uuid();
      f.customer_ref = outcome.customer_ref;
      f.category = fact.claim;
      f.created_at = now;
    }
    f.source = FlagSource::Presentation;
    f.request_id = outcome.request_id;
    f.evidence = outcome.facts;
    f.note.reset();
    f.cycle_start = now;
    f.review_due = add_months(now, kReviewMonths);
    log(Value::Map{{"event", "flag"}, {"flag", f.to_value()}});
    flags_[f.flag_id] = f;
    out.push_back(f);
  }
  return out;
}

void BankStore::store_presentation(const StoredPresentation& p) {
  std::lock_guard lock(mu_);
  log(Value::Map{{"event", "presentation"}, {"presentation", p.to_value()}});
  presentations_.push_back(p);
}

CareFlag BankStore::add_manual_flag(const std::string& customer_ref, const std::string& category, std::string note,
                                    Instant now) {
  if (!is_driver(category)) fail(Errc::InvalidArgument, "unknown category " + category);
  std::lock_guard lock(mu_);
  if (!customers_.count(customer_ref)) fail(Errc::UnknownCustomer, customer_ref);
  auto it = std::find_if(flags_.begin(), flags_.end(), [&](const auto& kv) {
    return kv.second.customer_ref == customer_ref && kv.second.category == category &&
           kv.second.state == FlagState::Active;
  });
  CareFlag f;
  if (it != flags_.end()) {
    f = it->second;
  } else {
    f.flag_id = random_uuid();
    f.customer_ref = customer_ref;
    f.category = category;
    f.created_at = now;
  }
  f.source = FlagSource::AgentManual;
  f.request_id.reset();
  f.evidence.clear();
  f.note = std::move(note);
  f.cycle_start = now;
  f.review_due = add_months(now, kReviewMonths);
  log(Value::Map{{"event", "flag"}, {"flag", f.to_value()}});
  flags_[f.flag_id] = f;
  return f;
}

CareFlag& BankStore::active_flag(const std::string& flag_id) {
  auto it = flags_.find(flag_id);
  if (it == flags_.end() || it->second.state == FlagState::Erased) fail(Errc::NotFound, "unknown flag " + flag_id);
  if (it->second.state != FlagState::Active) fail(Errc::InvalidArgument, "flag is not active");
  return it->second;
}

CareFlag BankStore::mark_arrears(const std::string& flag_id, Instant now) {
  std::lock_guard lock(mu_);
  CareFlag f = active_flag(flag_id);
  if (f.arrears_monitoring) return f;
  f.arrears_monitoring = add_months(now, kArrearsMonths);
  log(Value::Map{{"event", "flag"}, {"flag", f.to_value()}});
  return flags_[flag_id] = f;
}

std::vector<ReviewItem> BankStore::run_review(Instant now) const {
  std::lock_guard lock(mu_);
  std::vector<ReviewItem> out;
  for (const auto& [_, f] : flags_) {
    if (f.state != FlagState::Active) continue;
    if (f.review_due <= now) out.push_back({f, ReviewAction::ReviewDue});
    if (f.arrears_monitoring && *f.arrears_monitoring <= now) out.push_back({f, ReviewAction::MonitorDue});
  }
  return out;
}

CareFlag BankStore::act(const std::string& flag_id, FlagDecision decision, Instant now) {
  std::lock_guard lock(mu_);
  CareFlag f = active_flag(flag_id);
  switch (decision) {
    case FlagDecision::Renew:
      if (now < f.review_due) fail(Errc::InvalidArgument, "review not due until " + f.review_due.iso());
      f.cycle_start = f.review_due;
      f.review_due = add_months(f.review_due, kReviewMonths);
      break;
    case FlagDecision::Resolve:
      f.state = FlagState::Resolved;
      f.arrears_monitoring.reset();
      break;
    case FlagDecision::MonitorNext:
      if (!f.arrears_monitoring) fail(Errc::InvalidArgument, "flag is not in arrears monitoring");
      if (now < *f.arrears_monitoring) fail(Errc::InvalidArgument, "arrears check not due");
      f.arrears_monitoring = add_months(*f.arrears_monitoring, kArrearsMonths);
      break;
    case FlagDecision::EndArrears:
      if (!f.arrears_monitoring) fail(Errc::InvalidArgument, "flag is not in arrears monitoring");
      f.arrears_monitoring.reset();
      break;
  }
  log(Value::Map{{"event", "flag"}, {"flag", f.to_value()}});
  return flags_[flag_id] = f;
}

std::vector<CareFlag> BankStore::flags(const std::string& customer_ref) const {
  std::lock_guard lock(mu_);
  if (!customers_.count(customer_ref)) fail(Errc::UnknownCustomer, customer_ref);
  std::vector<CareFlag> out;
  for (const auto& [_, f] : flags_) {
    if (f.customer_ref == customer_ref) out.push_back(f);
  }
  return out;
}

std::vector<StoredPresentation> BankStore::presentations(const std::string& customer_ref) const {
  std::lock_guard lock(mu_);
  std::vector<StoredPresentation> out;
  for (const auto& p : presentations_) {
    if (p.customer_ref == customer_ref) out.push_back(p);
  }
  return out;
}

ErasureReport BankStore::forget_customer(const std::string& customer_ref, Instant now) {
  std::lock_guard lock(mu_);
  if (!customers_.count(customer_ref)) fail(Errc::UnknownCustomer, customer_ref);
  ErasureReport report;
  for (auto& [id, f] : flags_) {
    if (f.customer_ref != customer_ref || f.state == FlagState::Erased) continue;
    // The tombstone commits to the flag id and erasure time only, so it
    // cannot be brute-forced back to the category or evidence.
    Bytes t;
    append(t, std::string_view("care_support-tombstone:"));
    append(t, id);
    append(t, now.iso());
    CareFlag tomb;
    tomb.flag_id = id;
    tomb.customer_ref = customer_ref;
    tomb.state = FlagState::Erased;
    tomb.tombstone = digest(t);
    f = tomb;
    ++report.flags;
  }
  const auto before = presentations_.size();
  std::erase_if(presentations_, [&](const StoredPresentation& p) { return p.customer_ref == customer_ref; });
  report.presentations = before - presentations_.size();
  if (report.flags || report.presentations) write_snapshot();
  return report;
}

// ----------------------------------------------------------------- service

Value ForgetRequest::body_value() const {
  return Value::Map{{"action", "forget"},
                    {"customer_ref", customer_ref},
                    {"nonce", encode_bytes(nonce)},
                    {"timestamp", encode_instant(timestamp)}};
}

Value ForgetRequest::to_value() const {
  auto m = body_value().as_map();
  m.erase("action");
  m["signature"] = encode_bytes(signature);
  return m;
}

ForgetRequest ForgetRequest::from_value(const Value& v) {
  expect_keys(v, {"customer_ref", "nonce", "timestamp", "signature"});
  ForgetRequest r;
  r.customer_ref = v.at("customer_ref").as_text();
  r.nonce = decode_array<16>(v.at("nonce"));
  r.timestamp = decode_instant(v.at("timestamp"));
  r.signature = decode_array<64>(v.at("signature"));
  return r;
}

ForgetRequest ForgetRequest::make(std::string customer_ref, const KeyPair& holder_keys, Instant now) {
  ForgetRequest r;
  r.customer_ref = std::move(customer_ref);
  r.timestamp = now;
  r.nonce = random_array<16>();
  r.signature = sign(holder_keys.secret, as_bytes(canonicalize(r.body_value())));
  return r;
}

BankService::BankService(RegistryClient& registry, std::optional<std::filesystem::path> dir, Clock clock,
                         std::optional<KeyPair> keys)
    : registry_(registry), clock_(std::move(clock)), store_(dir) {
  if (keys) {
    keys_ = *keys;
  } else if (dir) {
    keys_ = load_or_create_key(*dir / kKeyFile);
  } else {
    keys_ = KeyPair::generate();
  }
  did_ = anchor_identity(keys_, std::nullopt, registry_);
  exchange_ = std::make_unique<VerifierExchange>(did_, public_url_ + "/present/response",
                                                 std::string(kFinancialAudience), registry_, nonces_);
}

void BankService::set_public_url(const std::string& url) {
  public_url_ = url;
  while (public_url_.ends_with('/')) public_url_.pop_back();
  exchange_->set_endpoint(public_url_ + "/present/response");
}

void BankService::register_customer(const std::string& customer_ref, const Did& holder) {
  if (customer_ref.empty()) fail(Errc::InvalidArgument, "empty customer_ref");
  store_.upsert_customer({customer_ref, holder});
}

PresentationRequest BankService::open_exchange(const std::string& customer_ref, const ScenarioSpec& spec) {
  auto customer = store_.customer(customer_ref);
  if (!customer) fail(Errc::UnknownCustomer, customer_ref);
  std::optional<std::string> endpoint;
  try {
    endpoint = registry_.resolve(customer->holder).service_endpoint;
  } catch (const Error& e) {
    if (e.code() != Errc::NotFound) throw;
  }
  if (!endpoint) fail(Errc::EndpointUnreachable, "holder DID publishes no service endpoint");
  auto base = *endpoint;
  while (base.ends_with('/')) base.pop_back();
  const Instant now = clock_();
  exchange_->prune(now);
  auto req = exchange_->open(customer_ref, customer->holder, spec, now);
  expect_ok(http_post(base + "/present/request", canonicalize(req.to_value())));
  return req;
}

VerificationOutcome BankService::receive(const PresentationResponse& response) {
  const Instant now = clock_();
  auto out = exchange_->receive(response, now);
  if (out.ok()) {
    store_.store_presentation(
        {out.request_id, out.customer_ref, now, out.facts, response.presentation->to_value()});
    store_.apply_flags(out, now);
  }
  return out;
}

ErasureReport BankService::handle_forget(const ForgetRequest& req) {
  auto customer = store_.customer(req.customer_ref);
  if (!customer) fail(Errc::UnknownCustomer, req.customer_ref);
  const Instant now = clock_();
  if (req.timestamp < now - kMinute * 5 || now + kMinute * 5 < req.timestamp) {
    fail(Errc::Unauthorized, "erasure request timestamp outside the allowed window");
  }
  const auto doc = registry_.resolve(customer->holder);
  if (!verify_signature(doc.verification_key, as_bytes(canonicalize(req.body_value())), req.signature)) {
    fail(Errc::Unauthorized, "erasure request not signed by the customer");
  }
  if (!forget_nonces_.consume(req.nonce, now)) fail(Errc::Unauthorized, "erasure request replayed");
  return store_.forget_customer(req.customer_ref, now);
}

void BankService::mount(HttpServer& server, std::optional<std::string> admin_token) {
  const auto is_agent = [token = admin_token](const HttpRequest& r) {
    return token ? r.header("authorization") == "Bearer " + *token : r.from_loopback();
  };
  const auto agent = [is_agent](const HttpRequest& r) {
    if (!is_agent(r)) fail(Errc::Unauthorized, "agent credentials required");
  };
  const auto body_of = [](const HttpRequest& r) { return r.body.empty() ? Value(Value::Map{}) : r.json(); };

  server.post("/present/response", [this](const HttpRequest& r) {
    PresentationResponse resp;
    try {
      resp = PresentationResponse::from_value(r.json());
    } catch (const Error& e) {
      fail(Errc::MalformedPayload, e.what());
    }
    const auto out = receive(resp);
    return HttpResponse::json(Value::Map{
        {"request_id", out.request_id}, {"outcome", outcome_name(out.outcome)}, {"verdict", out.verdict.str()}});
  });
  server.post("/exchange/open", [this, agent](const HttpRequest& r) {
    agent(r);
    const Value body = r.json();
    expect_keys(body, {"customer_ref", "scenario"}, {"holder_did"});
    const auto& ref = body.at("customer_ref").as_text();
    if (auto h = body.find("holder_did")) register_customer(ref, Did::parse(h->as_text()));
    return HttpResponse::json(open_exchange(ref, ScenarioSpec::from_value(body.at("scenario"))).to_value());
  });
  server.get(R"(/flags/([^/]+))", [this, agent](const HttpRequest& r) {
    agent(r);
    Value::List l;
    for (const auto& f : store_.flags(r.matches.at(1))) l.push_back(f.to_value());
    return HttpResponse::json(Value::Map{{"customer_ref", r.matches.at(1)}, {"flags", std::move(l)}});
  });
  server.post("/flags/review", [this, agent, body_of](const HttpRequest& r) {
    agent(r);
    const Value body = body_of(r);
    expect_keys(body, {}, {"now"});
    const Instant now = body.find("now") ? decode_instant(body.at("now")) : clock_();
    return HttpResponse::json(review_report(store_.run_review(now), now));
  });
  server.post("/flags/act", [this, agent](const HttpRequest& r) {
    agent(r);
    const Value body = r.json();
    expect_keys(body, {"flag_id", "decision"}, {"now"});
    auto d = parse_flag_decision(body.at("decision").as_text());
    if (!d) fail(Errc::InvalidArgument, "decision must be RENEW, RESOLVE, MONITOR_NEXT or END_ARREARS");
    const Instant now = body.find("now") ? decode_instant(body.at("now")) : clock_();
    return HttpResponse::json(store_.act(body.at("flag_id").as_text(), *d, now).to_value());
  });
  server.post("/flags/manual", [this, agent](const HttpRequest& r) {
    agent(r);
    const Value body = r.json();
    expect_keys(body, {"customer_ref", "category", "note"});
    return HttpResponse::json(store_
                                  .add_manual_flag(body.at("customer_ref").as_text(), body.at("category").as_text(),
                                                   body.at("note").as_text(), clock_())
                                  .to_value());
  });
  server.post("/flags/arrears", [this, agent](const HttpRequest& r) {
    agent(r);
    const Value body = r.json();
    expect_keys(body, {"flag_id"});
    return HttpResponse::json(store_.mark_arrears(body.at("flag_id").as_text(), clock_()).to_value());
  });
  server.post(R"(/forget/([^/]+))", [this, is_agent](const HttpRequest& r) {
    const auto& ref = r.matches.at(1);
    if (is_agent(r) && r.body.empty()) return HttpResponse::json(store_.forget_customer(ref, clock_()).to_value());
    ForgetRequest req;
    try {
      req = ForgetRequest::from_value(r.json());
    } catch (const Error& e) {
      fail(Errc::MalformedPayload, e.what());
    }
    if (req.customer_ref != ref) fail(Errc::Unauthorized, "erasure request names another customer");
    return HttpResponse::json(handle_forget(req).to_value());
  });
}

}  // namespace vsc
