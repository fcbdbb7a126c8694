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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support.hpp"
#include "vsc/bank.hpp"

using namespace vsc;
using vsc::testing::uniform;
using vsc::testing::World;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Io;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("vsc-bank-" + to_hex(random_array<6>()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string dir_bytes(const std::filesystem::path& dir) {
  std::string out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out.append(std::istreambuf_iterator<char>(in), {});
  }
  return out;
}

// Month arithmetic written out by hand: shift the month index, clamp the day.
std::string oracle_add_months(const std::string& iso, int months) {
  int y = std::stoi(iso.substr(0, 4)), m = std::stoi(iso.substr(5, 2)), d = std::stoi(iso.substr(8, 2));
  int idx = y * 12 + (m - 1) + months;
  y = idx / 12;
  m = idx % 12 + 1;
  static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int last = mdays[m - 1];
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) last = 29;
  d = std::min(d, last);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d%s", y, m, d, iso.substr(10).c_str());
  return buf;
}

VerificationOutcome outcome(const std::string& customer, std::array<bool, 4> drivers, Instant at,
                            std::int64_t months = 2) {
  VerificationOutcome o;
  o.request_id = random_uuid();
  o.customer_ref = customer;
  o.outcome = Outcome::Presented;
  o.received_at = at;
  for (std::size_t i = 0; i < 4; ++i) o.facts.push_back({std::string(kDriverClaims[i]), Value(drivers[i]), {}});
  o.facts.push_back({"work_incapacity_months", Value(months), {}});
  return o;
}

}  // namespace

TEST_CASE("calendar month oracle agrees with add_months") {
  CHECK(oracle_add_months("2021-01-31T10:00:00Z", 1) == "2021-02-28T10:00:00Z");
  CHECK(oracle_add_months("2024-02-29T00:00:00Z", 12) == "2025-02-28T00:00:00Z");
  for (int i = 0; i < 20000; ++i) {
    Date d{static_cast<int>(uniform(1971, 2400)), static_cast<unsigned>(uniform(1, 12)), 1};
    d.day = static_cast<unsigned>(uniform(1, days_in_month(d.year, d.month)));
    const Instant t = Instant::from_date(d, static_cast<int>(uniform(0, 23)), static_cast<int>(uniform(0, 59)),
                                         static_cast<int>(uniform(0, 59)));
    const int months = static_cast<int>(uniform(0, 40));
    REQUIRE(add_months(t, months).iso() == oracle_add_months(t.iso(), months));
  }
}

TEST_CASE("apply_flags") {
  BankStore store;
  store.upsert_customer({"c1", generate_did().did});
  const Instant created = Instant::parse("2021-05-01T00:00:00Z");

  auto flags = store.apply_flags(outcome("c1", {true, false, false, false}, created), created);
  REQUIRE(flags.size() == 1);
  CHECK(flags[0].category == "driver_health");
  CHECK(flags[0].state == FlagState::Active);
  CHECK(flags[0].source == FlagSource::Presentation);
  CHECK(flags[0].review_due == Instant::parse("2022-05-01T00:00:00Z"));
  CHECK(flags[0].evidence.size() == 5);
  CHECK(canonicalize(flags[0].to_value()).find("vulnerab") == std::string::npos);
  CHECK(flags[0].to_value().at("kind") == Value("care_support"));

  CHECK(store.apply_flags(outcome("c1", {false, false, false, false}, created), created).empty());
  auto denied = outcome("c1", {true, true, true, true}, created);
  denied.outcome = Outcome::Denied;
  CHECK(store.apply_flags(denied, created).empty());
  auto failed = outcome("c1", {true, true, true, true}, created);
  failed.verdict = Verdict::fail(FailReason::Revoked);
  CHECK(store.apply_flags(failed, created).empty());
  CHECK(store.flags("c1").size() == 1);

  // Same category again: merged, evidence replaced, clock restarted.
  const Instant later = Instant::parse("2021-08-15T12:00:00Z");
  auto merged = store.apply_flags(outcome("c1", {true, true, false, false}, later, 7), later);
  REQUIRE(merged.size() == 2);
  auto all = store.flags("c1");
  REQUIRE(all.size() == 2);
  const auto& health = merged[0].category == "driver_health" ? merged[0] : merged[1];
  CHECK(health.flag_id == flags[0].flag_id);
  CHECK(health.created_at == created);
  CHECK(health.review_due == Instant::parse("2022-08-15T12:00:00Z"));
  CHECK(health.evidence.back().value == Value(7));

  CHECK(code_of([&] { store.flags("nobody"); }) == Errc::UnknownCustomer);
}

TEST_CASE("review schedule") {
  BankStore store;
  store.upsert_customer({"c", generate_did().did});
  const Instant created = Instant::parse("2021-05-01T00:00:00Z");
  auto f = store.apply_flags(outcome("c", {false, false, true, false}, created), created).at(0);

  CHECK(store.run_review(f.review_due - kDay).empty());
  auto due = store.run_review(f.review_due);
  REQUIRE(due.size() == 1);
  CHECK(due[0].action == ReviewAction::ReviewDue);
  CHECK(code_of([&] { store.act(f.flag_id, FlagDecision::Renew, f.review_due - 1); }) == Errc::InvalidArgument);

  // Renewals step by exactly 12 calendar months.
  Instant prev = f.review_due;
  for (int i = 0; i < 10; ++i) {
    auto renewed = store.act(f.flag_id, FlagDecision::Renew, prev);
    CHECK(renewed.review_due.iso() == oracle_add_months(prev.iso(), 12));
    CHECK(renewed.cycle_start == prev);
    prev = renewed.review_due;
  }

  // Arrears: checked every 3 months.
  const Instant arrears_from = Instant::parse("2021-06-10T09:00:00Z");
  auto a = store.mark_arrears(f.flag_id, arrears_from);
  CHECK(a.arrears_monitoring == Instant::parse("2021-09-10T09:00:00Z"));
  CHECK(store.mark_arrears(f.flag_id, arrears_from + kDay).arrears_monitoring == a.arrears_monitoring);
  CHECK(store.run_review(*a.arrears_monitoring - 1).empty());
  auto m = store.run_review(*a.arrears_monitoring);
  REQUIRE(m.size() == 1);
  CHECK(m[0].action == ReviewAction::MonitorDue);
  auto next = store.act(f.flag_id, FlagDecision::MonitorNext, *a.arrears_monitoring);
  CHECK(next.arrears_monitoring == Instant::parse("2021-12-10T09:00:00Z"));
  CHECK(store.act(f.flag_id, FlagDecision::EndArrears, next.review_due).arrears_monitoring == std::nullopt);

  auto resolved = store.act(f.flag_id, FlagDecision::Resolve, created);
  CHECK(resolved.state == FlagState::Resolved);
  CHECK(store.run_review(Instant::parse("2099-01-01T00:00:00Z")).empty());
  CHECK(code_of([&] { store.act(f.flag_id, FlagDecision::Renew, prev); }) == Errc::InvalidArgument);
  CHECK(code_of([&] { store.act("missing", FlagDecision::Renew, prev); }) == Errc::NotFound);
}

TEST_CASE("manual flags") {
  BankStore store;
  CHECK(code_of([&] { store.add_manual_flag("c", "driver_health", "phone call", Instant{}); }) ==
        Errc::UnknownCustomer);
  store.upsert_customer({"c", generate_did().did});
  CHECK(code_of([&] { store.add_manual_flag("c", "vulnerable", "x", Instant{}); }) == Errc::InvalidArgument);
  auto f = store.add_manual_flag("c", "driver_life_events", "bereavement, phone call", Instant{});
  CHECK(f.source == FlagSource::AgentManual);
  CHECK(f.evidence.empty());
  CHECK(f.note == "bereavement, phone call");
}

TEST_CASE("persistence and erasure") {
  TempDir dir;
  const Instant t = Instant::parse("2021-05-01T00:00:00Z");
  const std::string secret_note = "private note 7f3a";
  const std::string other_note = "other customer note 19c2";
  std::string kept_flag;
  {
    BankStore store(dir.path);
    store.upsert_customer({"alice", generate_did().did});
    store.upsert_customer({"bob", generate_did().did});
    store.apply_flags(outcome("alice", {true, false, false, true}, t, 11), t);
    store.add_manual_flag("alice", "driver_low_capability", secret_note, t);
    kept_flag = store.add_manual_flag("bob", "driver_health", other_note, t).flag_id;
    for (int i = 0; i < 3; ++i) {
      store.store_presentation({random_uuid(), "alice", t, {{"detail", Value("alice detail text"), {}}},
                                Value::Map{{"blob", "alice presentation body"}}});
    }
  }
  {
    BankStore store(dir.path);
    CHECK(store.flags("alice").size() == 2);  // capability merged into the presented flag
    CHECK(store.presentations("alice").size() == 3);
    const auto report = store.forget_customer("alice", t + 10);
    CHECK(report.flags == 2);
    CHECK(report.presentations == 3);
    for (const auto& f : store.flags("alice")) {
      CHECK(f.state == FlagState::Erased);
      CHECK(f.category.empty());
      CHECK(f.evidence.empty());
      CHECK(f.tombstone.has_value());
    }
    CHECK(store.forget_customer("alice", t + 20).to_value() == Value(Value::Map{{"flags", 0}, {"presentations", 0}}));
    CHECK(code_of([&] { store.forget_customer("carol", t); }) == Errc::UnknownCustomer);
  }
  const auto bytes = dir_bytes(dir.path);
  for (const char* needle : {"alice detail text", "alice presentation body", "private note 7f3a", "driver_low_capability",
                             "\"value\":11"}) {
    CAPTURE(needle);
    CHECK(bytes.find(needle) == std::string::npos);
  }
  CHECK(bytes.find(other_note) != std::string::npos);

  BankStore reopened(dir.path);
  CHECK(reopened.presentations("alice").empty());
  CHECK(reopened.flags("bob").at(0).flag_id == kept_flag);
  // Later writes go to the new journal and survive a reopen.
  reopened.apply_flags(outcome("bob", {false, true, false, false}, t), t);
  BankStore again(dir.path);
  CHECK(again.flags("bob").size() == 2);
}

TEST_CASE("stale journal from an interrupted erasure is discarded") {
  TempDir dir;
  const Instant t = Instant::parse("2021-05-01T00:00:00Z");
  {
    BankStore store(dir.path);
    store.upsert_customer({"alice", generate_did().did});
    store.add_manual_flag("alice", "driver_health", "stale secret", t);
  }
  const auto journal0 = dir.path / "journal-0.log";
  const auto saved = dir_bytes(dir.path);  // only journal-0.log so far
  {
    BankStore store(dir.path);
    store.forget_customer("alice", t);
  }
  // Crash between snapshot and journal removal: the old journal reappears.
  std::ofstream(journal0, std::ios::binary) << saved;
  BankStore store(dir.path);
  CHECK(store.flags("alice").at(0).state == FlagState::Erased);
  CHECK(dir_bytes(dir.path).find("stale secret") == std::string::npos);
}

TEST_CASE("bank service over HTTP with a stub holder") {
  World w;
  BankService bank(w.registry, std::nullopt, [&] { return w.now; });
  HttpServer bank_http;
  bank.mount(bank_http);
  bank_http.start("127.0.0.1", 0);
  bank.set_public_url(bank_http.url());

  auto ffa = w.issue_fairness(World::fairness_values(3, true));
  std::vector<HeldCredential> wallet{{ffa.credential, ffa.secrets}};
  std::vector<std::string> replies;
  std::optional<PresentationRequest> seen;

  // The holder answers immediately with full consent.
  HttpServer holder_http;
  holder_http.post("/present/request", [&](const HttpRequest& r) {
    auto req = PresentationRequest::from_value(r.json());
    seen = req;
    auto res = handle_request(req, wallet, w.holder_identity(), {req.request_id, ConsentKind::AcceptAll, {}, w.now},
                              w.now);
    replies.push_back(canonicalize(expect_ok(http_post(req.verifier_endpoint, canonicalize(res.response.to_value())))));
    return HttpResponse::json(Value::Map{{"received", req.request_id}});
  });
  holder_http.start("127.0.0.1", 0);

  // Holder DID now points at the stub.
  auto doc = w.registry.resolve(w.holder.did);
  w.registry.anchor(sign_anchor(next_version(doc, w.holder.keys.public_key, holder_http.url()), w.holder.keys.secret));

  const ScenarioSpec ffa_spec{std::string(kFairnessForAllScheme), {}, "support check"};
  CHECK(code_of([&] { bank.open_exchange("cust", ffa_spec); }) == Errc::UnknownCustomer);

  auto open_body = canonicalize(
      Value::Map{{"customer_ref", "cust"}, {"holder_did", w.holder.did.str()}, {"scenario", ffa_spec.to_value()}});
  auto req = PresentationRequest::from_value(expect_ok(http_post(bank_http.url() + "/exchange/open", open_body)));
  REQUIRE(seen);
  CHECK(seen->request_id == req.request_id);
  CHECK(req.verifier_endpoint == bank_http.url() + "/present/response");
  REQUIRE(replies.size() == 1);
  CHECK(parse(replies[0]).at("verdict") == Value("Ok"));

  auto flags = expect_ok(http_get(bank_http.url() + "/flags/cust"));
  REQUIRE(flags.at("flags").as_list().size() == 1);
  const auto flag = CareFlag::from_value(flags.at("flags").as_list()[0]);
  CHECK(flag.category == "driver_health");
  CHECK(flag.review_due == add_months(w.now, 12));

  auto review = expect_ok(http_post(bank_http.url() + "/flags/review",
                                    canonicalize(Value::Map{{"now", encode_instant(flag.review_due)}})));
  CHECK(review.at("actions").as_list().size() == 1);
  auto renewed = expect_ok(http_post(bank_http.url() + "/flags/act",
                                     canonicalize(Value::Map{{"flag_id", flag.flag_id},
                                                             {"decision", "RENEW"},
                                                             {"now", encode_instant(flag.review_due)}})));
  CHECK(CareFlag::from_value(renewed).review_due == add_months(flag.review_due, 12));

  // Erasure signed by the customer; a foreign key is refused.
  auto forged = ForgetRequest::make("cust", w.bank.keys, w.now);
  CHECK(code_of([&] { bank.handle_forget(forged); }) == Errc::Unauthorized);
  auto forget = ForgetRequest::make("cust", w.holder.keys, w.now);
  auto report = expect_ok(http_post(bank_http.url() + "/forget/cust", canonicalize(forget.to_value())));
  CHECK(report == Value(Value::Map{{"flags", 1}, {"presentations", 1}}));
  CHECK(code_of([&] { expect_ok(http_post(bank_http.url() + "/forget/cust", canonicalize(forget.to_value()))); }) ==
        Errc::Unauthorized);  // replayed
  CHECK(expect_ok(http_post(bank_http.url() + "/forget/cust", "")) ==
        Value(Value::Map{{"flags", 0}, {"presentations", 0}}));

  // Holder endpoint gone.
  holder_http.stop();
  CHECK(code_of([&] { bank.open_exchange("cust", ffa_spec); }) == Errc::EndpointUnreachable);
}
