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

}  // namespace

TEST_CASE("issued credentials verify and carry their schema's claims only") {
  World w;
  auto full = w.issue_full();
  auto ffa = w.issue_fairness();
  CHECK(verify_full(full.credential, w.registry, w.now).ok());
  CHECK(verify_full(ffa.credential, w.registry, w.now).ok());

  CHECK(full.secrets.find("nhs_number"));
  CHECK_FALSE(ffa.secrets.find("nhs_number"));
  CHECK_FALSE(ffa.secrets.find("detail"));
  CHECK(ffa.credential.intended_audience == std::string(kFinancialAudience));
  CHECK_FALSE(full.credential.intended_audience);
  CHECK(ffa.secrets.claims.size() == 5);

  CHECK(full.secrets.root() == full.credential.claims_root);
  CHECK(full.credential.credential_id == derive_credential_id(full.credential));
  CHECK(full.credential.expires_at == Instant::parse("2022-06-01T09:00:00Z"));
  CHECK(full.credential.suite == "Ed25519/SHA-256");
}

TEST_CASE("driver-context group covers drivers and assessment date") {
  World w;
  auto full = w.issue_full();
  REQUIRE(full.credential.groups.size() == 1);
  CHECK(full.credential.groups[0].group_id == "driver-context");
  CHECK(full.credential.groups[0].members ==
        std::vector<std::string>{"assessment_date", "driver_health", "driver_life_events", "driver_low_capability",
                                 "driver_low_resilience"});
  auto ffa = w.issue_fairness();
  REQUIRE(ffa.credential.groups.size() == 1);
  CHECK(ffa.credential.groups[0].members.size() == 4);
}

TEST_CASE("envelope holds no claim values or salts") {
  World w;
  auto full = w.issue_full();
  const std::string env = canonicalize(full.credential.to_value());
  for (const auto& c : full.secrets.claims) {
    CHECK(env.find(to_base64url(c.salt)) == std::string::npos);
    if (c.value.is_text()) CHECK(env.find(c.value.as_text()) == std::string::npos);
  }
  CHECK(env.find("9434765919") == std::string::npos);
}

TEST_CASE("credential and secrets round trip through canonical bytes") {
  World w;
  auto full = w.issue_full();
  CHECK(VerifiableCredential::from_value(parse(canonicalize(full.credential.to_value()))) == full.credential);
  auto secrets = HolderSecrets::from_value(parse(canonicalize(full.secrets.to_value())));
  CHECK(secrets.root() == full.credential.claims_root);
}

TEST_CASE("schema enforcement") {
  World w;
  auto values = World::full_values();
  SUBCASE("missing required") {
    values.erase("driver_health");
    CHECK(code_of([&] { w.issue_full(values); }) == Errc::SchemaViolation);
  }
  SUBCASE("unknown attribute") {
    values["shoe_size"] = 9;
    CHECK(code_of([&] { w.issue_full(values); }) == Errc::SchemaViolation);
  }
  SUBCASE("wrong kind") {
    values["driver_health"] = "yes";
    CHECK(code_of([&] { w.issue_full(values); }) == Errc::SchemaViolation);
  }
  SUBCASE("bad date") {
    values["date_of_birth"] = "1996-02-30";
    CHECK(code_of([&] { w.issue_full(values); }) == Errc::SchemaViolation);
  }
  SUBCASE("incapacity beyond ladder range") {
    values["work_incapacity_months"] = 121;
    CHECK(code_of([&] { w.issue_full(values); }) == Errc::LadderOutOfRange);
  }
  SUBCASE("optional detail may be omitted") {
    values.erase("detail");
    CHECK(verify_full(w.issue_full(values).credential, w.registry, w.now).ok());
  }
}

TEST_CASE("status slots are unique and released on failure") {
  World w;
  StatusRef slot{"status-0", 7};
  ensure_status_list(w.issuer.keys, w.issuer.did, "status-0", w.registry);
  auto values = World::fairness_values();
  issue(fairness_for_all_schema(), w.issuer.keys, w.issuer.did, w.holder.did, values, slot, w.slots, w.now);
  CHECK(code_of([&] {
          issue(fairness_for_all_schema(), w.issuer.keys, w.issuer.did, w.holder.did, values, slot, w.slots, w.now);
        }) == Errc::StatusSlotTaken);

  StatusRef other{"status-0", 8};
  values["work_incapacity_months"] = -1;
  CHECK_THROWS(issue(fairness_for_all_schema(), w.issuer.keys, w.issuer.did, w.holder.did, values, other, w.slots,
                     w.now));
  CHECK_FALSE(w.slots.taken(other));

  StatusAllocator alloc;
  std::set<StatusRef> seen;
  for (int i = 0; i < 3000; ++i) REQUIRE(seen.insert(alloc.next()).second);
  CHECK(seen.count(StatusRef{"status-2", 951}) == 1);
}

TEST_CASE("expiry boundary") {
  World w;
  auto c = w.issue_fairness();
  CHECK(verify_full(c.credential, w.registry, c.credential.expires_at - 1).ok());
  CHECK(verify_full(c.credential, w.registry, c.credential.expires_at).failure == FailReason::Expired);
}

TEST_CASE("revocation") {
  World w;
  auto c = w.issue_fairness();
  auto other = w.issue_fairness();
  const auto blocks_before = w.registry.size();
  revoke(w.issuer.keys, w.issuer.did, c.credential.status, w.registry);
  CHECK(w.registry.size() == blocks_before + 1);
  CHECK(verify_full(c.credential, w.registry, w.now).failure == FailReason::Revoked);
  CHECK(verify_full(other.credential, w.registry, w.now).ok());

  // Idempotent: no new version.
  auto again = revoke(w.issuer.keys, w.issuer.did, c.credential.status, w.registry);
  CHECK(w.registry.size() == blocks_before + 1);
  CHECK(again.version == 1);

  CHECK(code_of([&] { revoke(w.holder.keys, w.issuer.did, other.credential.status, w.registry); }) ==
        Errc::Unauthorized);
}

TEST_CASE("verify_full failure reasons") {
  World w;
  auto c = w.issue_fairness();
  SUBCASE("issuer not anchored") {
    World elsewhere;
    CHECK(verify_full(c.credential, elsewhere.registry, w.now).failure == FailReason::IssuerUnresolvable);
  }
  SUBCASE("suite changed") {
    auto vc = c.credential;
    vc.suite = "Ed448/SHA-512";
    CHECK(verify_full(vc, w.registry, w.now).failure == FailReason::SignatureInvalid);
  }
  SUBCASE("claims root changed") {
    auto vc = c.credential;
    vc.claims_root[0] ^= 1;
    CHECK(verify_full(vc, w.registry, w.now).failure == FailReason::SignatureInvalid);
  }
  SUBCASE("status list missing") {
    auto vc = c.credential;
    vc.status.list_id = "status-99";
    vc.credential_id = derive_credential_id(vc);
    vc.signature = sign(w.issuer.keys.secret, as_bytes(canonicalize(vc.envelope_value())));
    CHECK(verify_full(vc, w.registry, w.now).failure == FailReason::StatusUnavailable);
  }
  SUBCASE("signed by someone else") {
    auto vc = c.credential;
    vc.signature = sign(w.holder.keys.secret, as_bytes(canonicalize(vc.envelope_value())));
    CHECK(verify_full(vc, w.registry, w.now).failure == FailReason::SignatureInvalid);
  }
}

TEST_CASE("single-bit mutations of serialized envelopes are rejected") {
  World w;
  auto c = w.issue_full();
  const std::string bytes = canonicalize(c.credential.to_value());
  int rejected = 0;
  const int trials = 500;
  for (int i = 0; i < trials; ++i) {
    std::string m = bytes;
    const auto pos = static_cast<std::size_t>(uniform(0, m.size() - 1));
    m[pos] = static_cast<char>(m[pos] ^ (1 << uniform(0, 7)));
    try {
      auto vc = VerifiableCredential::from_value(parse(m));
      if (!verify_full(vc, w.registry, w.now).ok()) ++rejected;
    } catch (const Error&) {
      ++rejected;
    }
  }
  CHECK(rejected == trials);
}

TEST_CASE("fail reason names round trip") {
  for (int i = 0; i <= static_cast<int>(FailReason::GroupViolation); ++i) {
    auto r = static_cast<FailReason>(i);
    CHECK(parse_fail_reason(fail_reason_name(r)) == r);
  }
  CHECK_FALSE(parse_fail_reason("Fine"));
}
