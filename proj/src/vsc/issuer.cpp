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

#include "vsc/issuer.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vsc/storage.hpp"

namespace vsc {

bool nhs_number_valid(std::string_view nhs) noexcept {
  if (nhs.size() != 10) return false;
  int sum = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(nhs[i]))) return false;
    if (i < 9) sum += (nhs[i] - '0') * static_cast<int>(10 - i);
  }
  int check = 11 - sum % 11;
  if (check == 11) check = 0;
  if (check == 10) return false;
  return check == nhs[9] - '0';
}

Value::Map SubjectRecord::full_values() const {
  Value::Map m{{"nhs_number", nhs_number},
               {"date_of_birth", date_of_birth},
               {"birth_year", date_of_birth.year},
               {"assessment_date", assessment_date},
               {"work_incapacity_months", work_incapacity_months},
               {"detail", detail}};
  for (std::size_t i = 0; i < kDriverClaims.size(); ++i) m[std::string(kDriverClaims[i])] = drivers[i];
  return m;
}

Value::Map SubjectRecord::fairness_values() const {
  Value::Map m{{"work_incapacity_months", work_incapacity_months}};
  for (std::size_t i = 0; i < kDriverClaims.size(); ++i) m[std::string(kDriverClaims[i])] = drivers[i];
  return m;
}

// ------------------------------------------------------------------ ingest

namespace {

const std::vector<std::string>& columns() {
  static const std::vector<std::string> c = {
      "nhs_number",           "date_of_birth", "assessment_date", "driver_health", "driver_life_events",
      "driver_low_resilience", "driver_low_capability", "work_incapacity_months", "detail", "subject_did"};
  return c;
}

[[noreturn]] void bad(std::size_t line, Errc code, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what, line);
}

bool parse_bool(const std::string& s, std::size_t line, const std::string& col) {
  if (s == "true") return true;
  if (s == "false") return false;
  bad(line, Errc::ParseError, col + " must be true or false");
}

// Builds and validates a record from column texts.
SubjectRecord make_record(const std::map<std::string, std::string>& f, std::size_t line) {
  SubjectRecord r;
  const auto get = [&](const std::string& k) -> const std::string& {
    auto it = f.find(k);
    if (it == f.end()) bad(line, Errc::ParseError, "missing " + k);
    return it->second;
  };
  r.nhs_number = get("nhs_number");
  if (r.nhs_number.size() != 10 ||
      !std::all_of(r.nhs_number.begin(), r.nhs_number.end(), [](unsigned char c) { return std::isdigit(c); })) {
    bad(line, Errc::ParseError, "nhs_number must be ten digits");
  }
  if (!nhs_number_valid(r.nhs_number)) bad(line, Errc::ChecksumError, "nhs_number check digit mismatch");
  try {
    r.date_of_birth = Date::parse(get("date_of_birth"));
    r.assessment_date = Date::parse(get("assessment_date"));
  } catch (const Error& e) {
    bad(line, Errc::ParseError, e.what());
  }
  if (r.assessment_date < r.date_of_birth) bad(line, Errc::ParseError, "assessment_date before date_of_birth");
  for (std::size_t i = 0; i < kDriverClaims.size(); ++i) {
    const std::string col(kDriverClaims[i]);
    r.drivers[i] = parse_bool(get(col), line, col);
  }
  const auto& months = get("work_incapacity_months");
  std::size_t used = 0;
  try {
    r.work_incapacity_months = std::stoll(months, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != months.size()) bad(line, Errc::ParseError, "work_incapacity_months must be an integer");
  const auto* spec = vulnerability_status_schema().find("work_incapacity_months");
  if (r.work_incapacity_months < spec->ladder->v_min || r.work_incapacity_months > spec->ladder->v_max) {
    bad(line, Errc::ParseError,
        "work_incapacity_months outside " + std::to_string(spec->ladder->v_min) + ".." +
            std::to_string(spec->ladder->v_max));
  }
  r.detail = get("detail");
  if (!valid_utf8(r.detail)) bad(line, Errc::ParseError, "detail is not UTF-8");
  try {
    r.subject_did = Did::parse(get("subject_did"));
  } catch (const Error& e) {
    bad(line, Errc::ParseError, e.what());
  }
  return r;
}

// RFC 4180-ish: quoted fields may hold commas, doubled quotes and newlines.
// Each row records the line it started on.
std::vector<std::pair<std::size_t, std::vector<std::string>>> split_csv(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  std::size_t line = 1, row_line = 1;
  const auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    const bool blank = row.size() == 1 && row[0].empty() && !field_started;
    if (!blank) rows.emplace_back(row_line, std::move(row));
    row.clear();
    field_started = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) bad(line, Errc::ParseError, "quote inside an unquoted field");
        quoted = field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r': break;
      case '\n':
        end_row();
        row_line = ++line;
        break;
      default: field += c; field_started = true;
    }
  }
  if (quoted) bad(row_line, Errc::ParseError, "unterminated quoted field");
  if (!field.empty() || !row.empty() || field_started) end_row();
  return rows;
}

}  // namespace

std::vector<SubjectRecord> ingest_csv(std::string_view text) {
  auto rows = split_csv(text);
  if (rows.empty()) bad(1, Errc::ParseError, "empty file");
  const auto& header = rows.front().second;
  std::map<std::string, std::size_t> at;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!at.emplace(header[i], i).second) bad(1, Errc::ParseError, "duplicate column " + header[i]);
  }
  for (const auto& c : columns()) {
    if (!at.count(c)) bad(1, Errc::ParseError, "missing column " + c);
  }
  std::vector<SubjectRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, fields] = rows[r];
    if (fields.size() != header.size()) {
      bad(line, Errc::ParseError,
          "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    std::map<std::string, std::string> f;
    for (const auto& c : columns()) f[c] = fields[at[c]];
    out.push_back(make_record(f, line));
  }
  return out;
}

std::vector<SubjectRecord> ingest_jsonl(std::string_view text) {
  std::vector<SubjectRecord> out;
  std::size_t line = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      bad(line, Errc::ParseError, e.what());
    }
    if (!j.is_object()) bad(line, Errc::ParseError, "expected a JSON object");
    std::map<std::string, std::string> f;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (std::find(columns().begin(), columns().end(), it.key()) == columns().end()) {
        bad(line, Errc::ParseError, "unknown key " + it.key());
      }
      const auto& v = it.value();
      if (v.is_string()) {
        f[it.key()] = v.get<std::string>();
      } else if (v.is_boolean() || v.is_number_integer()) {
        f[it.key()] = v.dump();
      } else {
        bad(line, Errc::ParseError, it.key() + " has an unsupported type");
      }
    }
    out.push_back(make_record(f, line));
  }
  return out;
}

std::vector<SubjectRecord> ingest(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(Errc::Io, "cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const auto ext = file.extension().string();
  if (ext == ".jsonl" || ext == ".json") return ingest_jsonl(ss.str());
  return ingest_csv(ss.str());
}

// ------------------------------------------------------------ wire formats

Value IssuedPair::to_value() const {
  const auto one = [](const IssuedCredential& c) {
    return Value::Map{{"credential", c.credential.to_value()}, {"secrets", c.secrets.to_value()}};
  };
  return Value::Map{{"full", one(full)}, {"fairness", one(fairness)}};
}

IssuedPair IssuedPair::from_value(const Value& v) {
  expect_keys(v, {"full", "fairness"});
  const auto one = [](const Value& x) {
    expect_keys(x, {"credential", "secrets"});
    return IssuedCredential{VerifiableCredential::from_value(x.at("credential")),
                            HolderSecrets::from_value(x.at("secrets"))};
  };
  return {one(v.at("full")), one(v.at("fairness"))};
}

Value IssueRequest::body_value() const {
  return Value::Map{{"nhs_number", nhs_number},
                    {"nonce", encode_bytes(nonce)},
                    {"subject", subject.str()},
                    {"timestamp", encode_instant(timestamp)}};
}

Value IssueRequest::to_value() const {
  auto m = body_value().as_map();
  m["signature"] = encode_bytes(signature);
  return m;
}

IssueRequest IssueRequest::from_value(const Value& v) {
  expect_keys(v, {"nhs_number", "nonce", "subject", "timestamp", "signature"});
  IssueRequest r;
  r.subject = Did::parse(v.at("subject").as_text());
  r.nhs_number = v.at("nhs_number").as_text();
  r.timestamp = decode_instant(v.at("timestamp"));
  r.nonce = decode_array<16>(v.at("nonce"));
  r.signature = decode_array<64>(v.at("signature"));
  return r;
}

IssueRequest IssueRequest::make(const Did& subject, const KeyPair& keys, std::string nhs_number, Instant now) {
  IssueRequest r;
  r.subject = subject;
  r.nhs_number = std::move(nhs_number);
  r.timestamp = now;
  r.nonce = random_array<16>();
  r.signature = sign(keys.secret, as_bytes(canonicalize(r.body_value())));
  return r;
}

// ----------------------------------------------------------------- service

IssuerService::IssuerService(RegistryClient& registry, std::optional<std::filesystem::path> state_dir, Clock clock,
                             std::optional<KeyPair> keys)
    : registry_(registry), state_dir_(std::move(state_dir)), clock_(std::move(clock)) {
  if (keys) {
    keys_ = *keys;
  } else if (state_dir_) {
    keys_ = load_or_create_key(*state_dir_ / kKeyFile);
  } else {
    keys_ = KeyPair::generate();
  }
  did_ = anchor_identity(keys_, std::nullopt, registry_);
  if (state_dir_) replay_journal();
}

void IssuerService::add_records(std::vector<SubjectRecord> records) {
  std::lock_guard lock(mu_);
  for (auto& r : records) records_[r.subject_did] = std::move(r);
}

std::optional<SubjectRecord> IssuerService::record_for(const Did& subject) const {
  std::lock_guard lock(mu_);
  auto it = records_.find(subject);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void IssuerService::journal(const Value& record) {
  if (!state_dir_) return;
  append_durable(*state_dir_ / kJournalFile, canonicalize(record) + "\n");
}

void IssuerService::replay_journal() {
  const auto path = *state_dir_ / kJournalFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::size_t line = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line;
    try {
      const Value v = parse(raw);
      const auto& event = v.at("event").as_text();
      if (event == "ISSUED") {
        for (const auto& c : v.at("credentials").as_list()) {
          auto vc = VerifiableCredential::from_value(c);
          slots_.claim(vc.status);
          issued_[vc.credential_id] = {vc, false};
        }
      } else if (event == "REVOKED") {
        auto it = issued_.find(v.at("credential_id").as_text());
        if (it != issued_.end()) it->second.revoked = true;
      } else {
        fail(Errc::MalformedPayload, "unknown event " + event);
      }
    } catch (const Error& e) {
      throw Error(Errc::Io, path.string() + " line " + std::to_string(line) + ": " + e.what(), line);
    }
  }
}

IssuedPair IssuerService::issue_pair(const SubjectRecord& record) {
  const Instant now = clock_();
  const auto one = [&](const SchemaDefinition& schema, const Value::Map& values) {
    const auto slot = slots_.next();
    ensure_status_list(keys_, did_, slot.list_id, registry_);
    return issue(schema, keys_, did_, record.subject_did, values, slot, slots_, now);
  };
  IssuedPair pair{one(vulnerability_status_schema(), record.full_values()), {}};
  try {
    pair.fairness = one(fairness_for_all_schema(), record.fairness_values());
  } catch (...) {
    slots_.release(pair.full.credential.status);
    throw;
  }
  std::lock_guard lock(mu_);
  try {
    journal(Value::Map{{"event", "ISSUED"},
                       {"credentials", Value::List{pair.full.credential.to_value(), pair.fairness.credential.to_value()}}});
  } catch (...) {
    slots_.release(pair.full.credential.status);
    slots_.release(pair.fairness.credential.status);
    throw;
  }
  for (const auto* c : {&pair.full, &pair.fairness}) issued_[c->credential.credential_id] = {c->credential, false};
  return pair;
}

IssuedPair IssuerService::handle_issue(const IssueRequest& req) {
  const Instant now = clock_();
  if (req.timestamp < now - kIssueRequestSkew || now + kIssueRequestSkew < req.timestamp) {
    fail(Errc::Unauthorized, "issuance request timestamp outside the allowed window");
  }
  DidDocument doc;
  try {
    doc = registry_.resolve(req.subject);
  } catch (const Error& e) {
    if (e.code() == Errc::RegistryUnreachable) throw;
    fail(Errc::Unauthorized, "subject DID does not resolve");
  }
  if (!verify_signature(doc.verification_key, as_bytes(canonicalize(req.body_value())), req.signature)) {
    fail(Errc::Unauthorized, "issuance request signature invalid");
  }
  auto record = record_for(req.subject);
  if (!record || record->nhs_number != req.nhs_number) fail(Errc::NotFound, "no assessment on file for this subject");
  if (!request_nonces_.consume(req.nonce, now)) fail(Errc::Unauthorized, "issuance request replayed");
  return issue_pair(*record);
}

void IssuerService::revoke_credential(const std::string& credential_id) {
  StatusRef ref;
  {
    std::lock_guard lock(mu_);
    auto it = issued_.find(credential_id);
    if (it == issued_.end()) fail(Errc::NotFound, "unknown credential " + credential_id);
    ref = it->second.credential.status;
  }
  revoke(keys_, did_, ref, registry_);
  std::lock_guard lock(mu_);
  auto& info = issued_.at(credential_id);
  if (!info.revoked) {
    journal(Value::Map{{"event", "REVOKED"}, {"credential_id", credential_id}});
    info.revoked = true;
  }
}

std::vector<IssuerService::IssuedInfo> IssuerService::issued() const {
  std::lock_guard lock(mu_);
  std::vector<IssuedInfo> out;
  for (const auto& [id, info] : issued_) out.push_back(info);
  return out;
}

void IssuerService::mount(HttpServer& server, std::optional<std::string> admin_token) {
  const auto admin = [token = std::move(admin_token)](const HttpRequest& r) {
    if (token) {
      if (r.header("authorization") != "Bearer " + *token) fail(Errc::Unauthorized, "admin token required");
    } else if (!r.from_loopback()) {
      fail(Errc::Unauthorized, "admin routes are loopback-only");
    }
  };
  server.post("/issue", [this](const HttpRequest& r) {
    IssueRequest req;
    try {
      req = IssueRequest::from_value(r.json());
    } catch (const Error& e) {
      fail(Errc::MalformedPayload, e.what());
    }
    return HttpResponse::json(handle_issue(req).to_value());
  });
  server.post("/admin/revoke", [this, admin](const HttpRequest& r) {
    admin(r);
    const Value body = r.json();
    expect_keys(body, {"credential_id"});
    const auto& id = body.at("credential_id").as_text();
    revoke_credential(id);
    return HttpResponse::json(Value::Map{{"credential_id", id}, {"status", "REVOKED"}});
  });
  server.get("/admin/issued", [this, admin](const HttpRequest& r) {
    admin(r);
    Value::List out;
    for (const auto& info : issued()) {
      out.push_back(Value::Map{{"credential", info.credential.to_value()}, {"revoked", info.revoked}});
    }
    return HttpResponse::json(Value::Map{{"issued", std::move(out)}});
  });
}

}  // namespace vsc
