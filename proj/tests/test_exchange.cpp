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

#include "doctest.h"
#include "support.hpp"

using namespace vsc;
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

struct Bank {
  World& w;
  NonceCache nonces;
  VerifierExchange exchange{w.bank.did, "http://127.0.0.1:9/present/response", std::string(kFinancialAudience),
                            w.registry, nonces};
  explicit Bank(World& world) : w(world) {}
};

ScenarioSpec fairness_spec() { return {std::string(kFairnessForAllScheme), {}, "Fairness for All support check"}; }

ConsentDecision decide(const PresentationRequest& r, ConsentKind k, std::vector<std::size_t> granted = {}) {
  return {r.request_id, k, std::move(granted), Instant{}};
}

}  // namespace

TEST_CASE("request shape") {
  World w;
  NonceCache nonces;
  ScenarioSpec bad{std::string(kFairnessForAllScheme), {RequestItem::reveal("driver_health")}, "x"};
  CHECK(code_of([&] { build_request(w.bank.did, "u", std::nullopt, bad, w.now, nonces); }) == Errc::InvalidShape);
  ScenarioSpec empty{std::nullopt, {}, "x"};
  CHECK(code_of([&] { build_request(w.bank.did, "u", std::nullopt, empty, w.now, nonces); }) == Errc::InvalidShape);

  ScenarioSpec age{std::nullopt, {age_at_least(18, Date{2021, 6, 1})}, "age check"};
  auto r1 = build_request(w.bank.did, "u", std::nullopt, age, w.now, nonces);
  auto r2 = build_request(w.bank.did, "u", std::nullopt, age, w.now, nonces);
  CHECK(r1.nonce != r2.nonce);
  CHECK(r1.request_id != r2.request_id);
  CHECK(r1.request_id.size() == 36);
  CHECK(r1.items[0].claim == "birth_year");
  CHECK(r1.items[0].predicate->op == Direction::Lte);
  CHECK(r1.items[0].predicate->threshold == 2003);
  CHECK(r1.expires_at == w.now + 600);
  CHECK(nonces.size() == 2);
  CHECK(canonicalize(PresentationRequest::from_value(parse(canonicalize(r1.to_value()))).to_value()) ==
        canonicalize(r1.to_value()));
}

TEST_CASE("scheme request end to end") {
  World w;
  Bank bank(w);
  std::vector<HeldCredential> wallet;
  for (auto ic : {w.issue_full(World::full_values(2)), w.issue_fairness(World::fairness_values(2))}) {
    wallet.push_back({ic.credential, ic.secrets});
  }
  auto req = bank.exchange.open("cust-1", w.holder.did, fairness_spec(), w.now);
  auto res = handle_request(req, wallet, w.holder_identity(), decide(req, ConsentKind::AcceptAll), w.now);
  REQUIRE_FALSE(res.local_error);
  REQUIRE(res.response.outcome == Outcome::Presented);
  CHECK(res.response.presentation->credential.schema == kFairnessForAllCredential);
  CHECK(res.shared.size() == 5);

  auto wire = PresentationResponse::from_value(parse(canonicalize(res.response.to_value())));
  auto out = bank.exchange.receive(wire, w.now + 5);
  REQUIRE(out.ok());
  CHECK(out.customer_ref == "cust-1");
  CHECK(out.facts.size() == 5);
  int true_drivers = 0;
  for (const auto& f : out.facts) {
    if (f.claim.starts_with("driver_") && f.value->as_bool()) ++true_drivers;
    if (f.claim == "work_incapacity_months") CHECK(f.value->as_int() == 2);
  }
  CHECK(true_drivers == 1);

  // Duplicate delivery of the same bytes.
  CHECK(bank.exchange.receive(wire, w.now + 6).verdict.failure == FailReason::NonceReplayed);
  CHECK(code_of([&] { bank.exchange.receive(PresentationResponse::denied(req.request_id), w.now); }) ==
        Errc::AlreadyDecided);
}

TEST_CASE("denials are byte-identical whatever the cause") {
  World w;
  Bank bank(w);
  auto ffa = w.issue_fairness();
  std::vector<HeldCredential> wallet{{ffa.credential, ffa.secrets}};
  auto req = bank.exchange.open("c", std::nullopt, fairness_spec(), w.now);
  const std::string expected = canonicalize(PresentationResponse::denied(req.request_id).to_value());

  auto denied = handle_request(req, wallet, w.holder_identity(), decide(req, ConsentKind::Deny), w.now);
  CHECK_FALSE(denied.local_error);
  auto empty = handle_request(req, {}, w.holder_identity(), decide(req, ConsentKind::AcceptAll), w.now);
  REQUIRE(empty.local_error);
  CHECK(empty.local_error->code() == Errc::NotFound);
  auto late = handle_request(req, wallet, w.holder_identity(), decide(req, ConsentKind::AcceptAll), req.expires_at);
  CHECK(late.local_error->code() == Errc::RequestExpired);
  auto partial = handle_request(req, wallet, w.holder_identity(), decide(req, ConsentKind::Partial, {0}), w.now);
  CHECK(partial.local_error->code() == Errc::InvalidShape);
  auto foreign = req;
  foreign.audience = "retail";
  auto wrong_aud = handle_request(foreign, wallet, w.holder_identity(), decide(req, ConsentKind::AcceptAll), w.now);
  CHECK(wrong_aud.local_error->code() == Errc::AudienceViolation);

  for (const auto* r : {&denied, &empty, &late, &partial, &wrong_aud}) {
    CHECK(canonicalize(r->response.to_value()) == expected);
    CHECK(r->shared.empty());
  }
}

TEST_CASE("itemized request with per-item grants") {
  World w;
  Bank bank(w);
  auto full = w.issue_full();
  std::vector<HeldCredential> wallet{{full.credential, full.secrets}};
  ScenarioSpec spec{std::nullopt,
                    {age_at_least(18, Date{2021, 6, 1}), RequestItem::reveal("driver_health"),
                     RequestItem::reveal("driver_life_events"), RequestItem::reveal("driver_low_resilience"),
                     RequestItem::reveal("driver_low_capability"), RequestItem::reveal("nhs_number")},
                    "account review"};

  SUBCASE("grant age only") {
    auto req = bank.exchange.open("c", w.holder.did, spec, w.now);
    auto res = handle_request(req, wallet, w.holder_identity(), decide(req, ConsentKind::Partial, {0}), w.now);
    REQUIRE(res.response.outcome == Outcome::Presented);
    CHECK(res.response.presentation->disclosed.empty());
    auto out = bank.exchange.receive(res.response, w.now);
    REQUIRE(out.ok());
    REQUIRE(out.facts.size() == 1);
    CHECK(out.facts[0].predicate->threshold == 2003);
  }
  SUBCASE("grant one driver of the group") {
    auto req = bank.exchange.open("c", w.holder.did, spec, w.now);
    auto res = handle_request(req, wallet, w.holder_identity(), decide(req, ConsentKind::Partial, {1}), w.now);
    CHECK(res.response.outcome == Outcome::Denied);
    CHECK(res.local_error->code() == Errc::GroupViolation);
  }
  SUBCASE("grant all drivers pulls in the rest of the group") {
    auto req = bank.exchange.open("c", w.holder.did, spec, w.now);
    auto res =
        handle_request(req, wallet, w.holder_identity(), decide(req, ConsentKind::Partial, {1, 2, 3, 4}), w.now);
    REQUIRE(res.response.outcome == Outcome::Presented);
    CHECK(res.response.presentation->disclosed.size() == 5);  // plus assessment_date
    CHECK(bank.exchange.receive(res.response, w.now).ok());
  }
  SUBCASE("accept all") {
    auto req = bank.exchange.open("c", w.holder.did, spec, w.now);
    auto res = handle_request(req, wallet, w.holder_identity(), decide(req, ConsentKind::AcceptAll), w.now);
    REQUIRE(res.response.outcome == Outcome::Presented);
    CHECK(bank.exchange.receive(res.response, w.now).facts.size() == 7);
  }
  SUBCASE("underage holder") {
    auto values = World::full_values();
    values["birth_year"] = 2005;
    values["date_of_birth"] = Date{2005, 1, 1};
    auto young = w.issue_full(values);
    std::vector<HeldCredential> yw{{young.credential, young.secrets}};
    auto req = bank.exchange.open("c", w.holder.did, spec, w.now);
    auto res = handle_request(req, yw, w.holder_identity(), decide(req, ConsentKind::Partial, {0}), w.now);
    CHECK(res.response.outcome == Outcome::Denied);
    CHECK(res.local_error->code() == Errc::PredicateUnsatisfiable);
  }
}

TEST_CASE("verifier request bookkeeping") {
  World w;
  Bank bank(w);
  auto ffa = w.issue_fairness();
  std::vector<HeldCredential> wallet{{ffa.credential, ffa.secrets}};

  CHECK(code_of([&] { bank.exchange.receive(PresentationResponse::denied("nope"), w.now); }) ==
        Errc::UnknownRequest);

  auto req = bank.exchange.open("c", w.holder.did, fairness_spec(), w.now);
  auto res = handle_request(req, wallet, w.holder_identity(), decide(req, ConsentKind::AcceptAll), w.now);
  CHECK(code_of([&] { bank.exchange.receive(res.response, req.expires_at); }) == Errc::RequestExpired);

  auto req2 = bank.exchange.open("c", w.holder.did, fairness_spec(), w.now);
  auto denied = bank.exchange.receive(PresentationResponse::denied(req2.request_id), w.now);
  CHECK(denied.outcome == Outcome::Denied);
  CHECK_FALSE(denied.ok());

  // A presentation answering another request carries the wrong nonce.
  auto req3 = bank.exchange.open("c", w.holder.did, fairness_spec(), w.now);
  auto req4 = bank.exchange.open("c", w.holder.did, fairness_spec(), w.now);
  auto res3 = handle_request(req3, wallet, w.holder_identity(), decide(req3, ConsentKind::AcceptAll), w.now);
  auto moved = res3.response;
  moved.request_id = req4.request_id;
  CHECK(bank.exchange.receive(moved, w.now).verdict.failure == FailReason::NonceMismatch);

  // Expected holder mismatch.
  auto req5 = bank.exchange.open("c", w.issuer.did, fairness_spec(), w.now);
  auto res5 = handle_request(req5, wallet, w.holder_identity(), decide(req5, ConsentKind::AcceptAll), w.now);
  CHECK(bank.exchange.receive(res5.response, w.now).verdict.failure == FailReason::HolderBindingInvalid);
}

TEST_CASE("response wire format") {
  auto d = PresentationResponse::denied("r-1");
  CHECK(canonicalize(d.to_value()) == R"({"outcome":"DENIED","request_id":"r-1"})");
  CHECK_THROWS(PresentationResponse::from_value(parse(std::string_view(R"({"outcome":"PRESENTED","request_id":"r"})"))));
}
