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
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "vsc/issuer.hpp"

using namespace vsc;
using vsc::testing::uniform;

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

// Check digit by the textbook route: weighted sum, then remainder table.
std::optional<int> oracle_check_digit(const std::string& nine) {
  static const int weights[9] = {10, 9, 8, 7, 6, 5, 4, 3, 2};
  int total = 0;
  for (int i = 0; i < 9; ++i) total += (nine[i] - '0') * weights[i];
  const int r = total % 11;
  if (r == 0) return 0;
  if (r == 1) return std::nullopt;  // 11 - 1 == 10
  return 11 - r;
}

std::string random_digits(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += static_cast<char>('0' + uniform(0, 9));
  return s;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("vsc-issuer-" + to_hex(random_array<6>()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string csv_header() {
  return "nhs_number,date_of_birth,assessment_date,driver_health,driver_life_events,driver_low_resilience,"
         "driver_low_capability,work_incapacity_months,detail,subject_did\n";
}

Bytes read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("NHS number check digit") {
  CHECK(nhs_number_valid("9434765919"));
  CHECK(nhs_number_valid("9876543210"));  // remainder 0 gives check digit 0
  CHECK_FALSE(nhs_number_valid("9434765918"));
  CHECK_FALSE(nhs_number_valid("943476591"));
  CHECK_FALSE(nhs_number_valid("94347659190"));
  CHECK_FALSE(nhs_number_valid("943476591a"));
  CHECK_FALSE(nhs_number_valid("1000000010"));  // remainder 1: no valid completion
  for (int i = 0; i < 5000; ++i) {
    const auto nine = random_digits(9);
    const auto check = oracle_check_digit(nine);
    int valid = 0;
    for (char d = '0'; d <= '9'; ++d) {
      const bool ok = nhs_number_valid(nine + d);
      REQUIRE(ok == (check && *check == d - '0'));
      valid += ok;
    }
    REQUIRE(valid == (check ? 1 : 0));
  }
}

TEST_CASE("CSV ingest") {
  testing::World w;
  const auto did = w.holder.did.str();
  const auto row = [&](std::string nhs, std::string dob = "1996-03-04", std::string assessed = "2021-04-12",
                       std::string months = "2", std::string detail = "\"long covid, reduced hours\"") {
    return nhs + "," + dob + "," + assessed + ",true,false,false,false," + months + "," + detail + "," + did + "\n";
  };

  auto ok = ingest_csv(csv_header() + row("9434765919") + "\n" + row("9876543210", "1980-01-31", "2021-01-01", "0",
                                                                     "\"quote \"\"here\"\"\nand a newline\""));
  REQUIRE(ok.size() == 2);
  CHECK(ok[0].detail == "long covid, reduced hours");
  CHECK(ok[0].drivers == std::array<bool, 4>{true, false, false, false});
  CHECK(ok[0].full_values().at("birth_year") == Value(1996));
  CHECK(ok[1].detail == "quote \"here\"\nand a newline");
  CHECK(ok[1].subject_did == w.holder.did);

  const auto line_of = [](const std::string& text) -> std::pair<Errc, std::size_t> {
    try {
      ingest_csv(text);
    } catch (const Error& e) {
      return {e.code(), e.line().value_or(0)};
    }
    FAIL("expected an error");
    return {Errc::Io, 0};
  };
  const auto two_good = csv_header() + row("9434765919") + row("9876543210");
  CHECK(line_of(two_good + row("9434765918")) == std::pair{Errc::ChecksumError, std::size_t{4}});
  CHECK(line_of(two_good + row("94347659")) == std::pair{Errc::ParseError, std::size_t{4}});
  CHECK(line_of(two_good + row("9434765919", "2021-05-01", "2021-04-12")) == std::pair{Errc::ParseError, std::size_t{4}});
  CHECK(line_of(two_good + row("9434765919", "1996-02-30")) == std::pair{Errc::ParseError, std::size_t{4}});
  CHECK(line_of(two_good + row("9434765919", "1996-03-04", "2021-04-12", "121")) ==
        std::pair{Errc::ParseError, std::size_t{4}});
  CHECK(line_of(two_good + row("9434765919", "1996-03-04", "2021-04-12", "2x")) ==
        std::pair{Errc::ParseError, std::size_t{4}});
  CHECK(line_of(two_good + "9434765919,1996-03-04\n") == std::pair{Errc::ParseError, std::size_t{4}});
  CHECK(line_of("nhs_number\n") == std::pair{Errc::ParseError, std::size_t{1}});
  CHECK(line_of(csv_header() + "\"open") == std::pair{Errc::ParseError, std::size_t{2}});

  // Same date of birth and assessment is allowed.
  CHECK(ingest_csv(csv_header() + row("9434765919", "2021-04-12", "2021-04-12")).size() == 1);
}

TEST_CASE("JSON Lines ingest") {
  testing::World w;
  const std::string good = R"({"nhs_number": "9434765919", "date_of_birth": "1996-03-04", "assessment_date": "2021-04-12",)"
                           R"( "driver_health": true, "driver_life_events": false, "driver_low_resilience": false,)"
                           R"( "driver_low_capability": false, "work_incapacity_months": 2, "detail": "x", "subject_did": ")" +
                           w.holder.did.str() + "\"}\n";
  CHECK(ingest_jsonl(good + "\n" + good).size() == 2);
  try {
    ingest_jsonl(good + "\n{\"nhs_number\": 1}\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(e.line() == 3);
  }
  std::string bad_check = good;
  bad_check.replace(bad_check.find("9434765919"), 10, "9434765910");
  CHECK(code_of([&] { ingest_jsonl(bad_check); }) == Errc::ChecksumError);
}

TEST_CASE("issuance, journal and revocation") {
  testing::World w;
  TempDir dir;
  SubjectRecord rec = ingest_csv(csv_header() + "9434765919,1996-03-04,2021-04-12,true,false,false,false,2,secret "
                                                "detail text," + w.holder.did.str() + "\n")[0];
  std::vector<IssuedPair> pairs;
  std::string issuer_did;
  {
    IssuerService issuer(w.registry, dir.path, [&] { return w.now; });
    issuer_did = issuer.did().str();
    issuer.add_records({rec});
    for (int i = 0; i < 3; ++i) pairs.push_back(issuer.issue_pair(rec));
    for (const auto& p : pairs) {
      CHECK(p.full.credential.schema == kVulnerabilityStatusCredential);
      CHECK(p.fairness.credential.schema == kFairnessForAllCredential);
      CHECK(p.full.secrets.root() == p.full.credential.claims_root);
      CHECK(p.fairness.secrets.root() == p.fairness.credential.claims_root);
      CHECK(verify_full(p.full.credential, w.registry, w.now).ok());
      CHECK(verify_full(p.fairness.credential, w.registry, w.now).ok());
      CHECK(p.full.secrets.find("birth_year")->value == Value(1996));
      CHECK(p.full.credential.expires_at == Instant::parse("2022-06-01T09:00:00Z"));
    }
    CHECK(issuer.issued().size() == 6);
    issuer.revoke_credential(pairs[0].full.credential.credential_id);
    issuer.revoke_credential(pairs[0].full.credential.credential_id);  // idempotent
    CHECK(code_of([&] { issuer.revoke_credential("nope"); }) == Errc::NotFound);
    CHECK(verify_full(pairs[0].full.credential, w.registry, w.now).failure == FailReason::Revoked);
    CHECK(verify_full(pairs[0].fairness.credential, w.registry, w.now).ok());
  }

  // The issuer's store holds envelopes only: no salt, seed or claim value.
  Bytes store;
  for (const auto& e : std::filesystem::directory_iterator(dir.path)) append(store, read_all(e.path()));
  for (const auto& p : pairs) {
    for (const auto* s : {&p.full.secrets, &p.fairness.secrets}) {
      for (const auto& c : s->claims) {
        CHECK_FALSE(contains(store, as_bytes(c.salt)));
        CHECK_FALSE(contains(store, as_bytes(to_base64url(c.salt))));
        if (c.ladder_seed) CHECK_FALSE(contains(store, as_bytes(to_base64url(*c.ladder_seed))));
      }
    }
  }
  CHECK_FALSE(contains(store, as_bytes(std::string_view("secret detail text"))));
  CHECK_FALSE(contains(store, as_bytes(std::string_view("9434765919"))));

  // Restart: same key, same DID, journal replayed, no slot reuse.
  IssuerService again(w.registry, dir.path, [&] { return w.now; });
  CHECK(again.did().str() == issuer_did);
  auto issued = again.issued();
  REQUIRE(issued.size() == 6);
  CHECK(std::count_if(issued.begin(), issued.end(), [](const auto& i) { return i.revoked; }) == 1);
  auto fresh = again.issue_pair(rec);
  std::set<StatusRef> slots;
  for (const auto& p : pairs) slots.insert({p.full.credential.status, p.fairness.credential.status});
  CHECK_FALSE(slots.count(fresh.full.credential.status));
  CHECK_FALSE(slots.count(fresh.fairness.credential.status));
}

TEST_CASE("pair issuance is all or nothing") {
  testing::World w;
  IssuerService issuer(w.registry, std::nullopt, [&] { return w.now; });
  SubjectRecord rec;
  rec.nhs_number = "9434765919";
  rec.date_of_birth = Date{1996, 3, 4};
  rec.assessment_date = Date{2021, 4, 12};
  rec.subject_did = w.holder.did;
  rec.work_incapacity_months = 500;  // beyond the ladder range: both schemas refuse
  CHECK(code_of([&] { issuer.issue_pair(rec); }) == Errc::LadderOutOfRange);
  CHECK(issuer.issued().empty());
  rec.work_incapacity_months = 3;
  auto p = issuer.issue_pair(rec);
  CHECK(p.fairness.credential.status.index == p.full.credential.status.index + 1);
  CHECK(issuer.issued().size() == 2);
}

TEST_CASE("authenticated issuance over HTTP") {
  testing::World w;
  IssuerService issuer(w.registry, std::nullopt, [&] { return w.now; });
  SubjectRecord rec = ingest_csv(csv_header() + "9434765919,1996-03-04,2021-04-12,false,true,false,false,4,x," +
                                 w.holder.did.str() + "\n")[0];
  issuer.add_records({rec});
  HttpServer server;
  issuer.mount(server, std::string("t0ken"));
  server.start("127.0.0.1", 0);
  const auto url = server.url();

  auto req = IssueRequest::make(w.holder.did, w.holder.keys, "9434765919", w.now);
  auto pair = IssuedPair::from_value(expect_ok(http_post(url + "/issue", canonicalize(req.to_value()))));
  CHECK(pair.full.credential.subject == w.holder.did);
  CHECK(pair.fairness.secrets.find("driver_life_events")->value == Value(true));

  // Replay, stale timestamp, wrong key, wrong number, unknown subject.
  CHECK(code_of([&] { expect_ok(http_post(url + "/issue", canonicalize(req.to_value()))); }) == Errc::Unauthorized);
  auto stale = IssueRequest::make(w.holder.did, w.holder.keys, "9434765919", w.now - 301);
  CHECK(code_of([&] { expect_ok(http_post(url + "/issue", canonicalize(stale.to_value()))); }) == Errc::Unauthorized);
  auto forged = IssueRequest::make(w.holder.did, w.bank.keys, "9434765919", w.now);
  CHECK(code_of([&] { expect_ok(http_post(url + "/issue", canonicalize(forged.to_value()))); }) == Errc::Unauthorized);
  auto wrong_nhs = IssueRequest::make(w.holder.did, w.holder.keys, "9876543210", w.now);
  CHECK(code_of([&] { expect_ok(http_post(url + "/issue", canonicalize(wrong_nhs.to_value()))); }) == Errc::NotFound);
  auto stranger = IssueRequest::make(w.bank.did, w.bank.keys, "9434765919", w.now);
  CHECK(code_of([&] { expect_ok(http_post(url + "/issue", canonicalize(stranger.to_value()))); }) == Errc::NotFound);
  CHECK(code_of([&] { expect_ok(http_post(url + "/issue", "{}")); }) == Errc::MalformedPayload);

  // Admin routes.
  const auto id = pair.full.credential.credential_id;
  const auto body = canonicalize(Value::Map{{"credential_id", id}});
  CHECK(code_of([&] { expect_ok(http_post(url + "/admin/revoke", body)); }) == Errc::Unauthorized);
  CHECK(code_of([&] { expect_ok(http_get(url + "/admin/issued", {{"Authorization", "Bearer nope"}})); }) ==
        Errc::Unauthorized);
  expect_ok(http_post(url + "/admin/revoke", body, {{"Authorization", "Bearer t0ken"}}));
  CHECK(verify_full(pair.full.credential, w.registry, w.now).failure == FailReason::Revoked);
  auto listed = expect_ok(http_get(url + "/admin/issued", {{"Authorization", "Bearer t0ken"}}));
  CHECK(listed.at("issued").as_list().size() == 2);
  const auto listed_bytes = canonicalize(listed);
  for (const auto& c : pair.full.secrets.claims) CHECK(listed_bytes.find(to_base64url(c.salt)) == std::string::npos);
}
