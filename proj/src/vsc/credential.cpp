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

#include "vsc/credential.hpp"

#include <algorithm>
#include <map>

namespace vsc {

// ----------------------------------------------------------------- schemas

const AttributeSpec* SchemaDefinition::find(std::string_view attr) const {
  for (const auto& a : attributes) {
    if (a.name == attr) return &a;
  }
  return nullptr;
}

std::vector<DisclosureGroup> SchemaDefinition::groups() const {
  std::map<std::string, std::vector<std::string>> by_id;
  for (const auto& a : attributes) {
    if (a.group) by_id[*a.group].push_back(a.name);
  }
  std::vector<DisclosureGroup> out;
  for (auto& [id, members] : by_id) {
    std::sort(members.begin(), members.end());
    out.push_back({id, std::move(members)});
  }
  return out;
}

namespace {

std::vector<AttributeSpec> driver_attributes() {
  std::vector<AttributeSpec> out;
  for (auto name : kDriverClaims) {
    out.push_back({std::string(name), AttrKind::Boolean, true, std::nullopt, std::string(kDriverContextGroup)});
  }
  return out;
}

AttributeSpec incapacity_attribute() {
  return {"work_incapacity_months", AttrKind::Integer, true, LadderSpec{Direction::Gte, 0, 120}, std::nullopt};
}

SchemaDefinition make_vulnerability_status() {
  SchemaDefinition s;
  s.name = std::string(kVulnerabilityStatusCredential);
  s.attributes = {
      {"nhs_number", AttrKind::Text, true, std::nullopt, std::nullopt},
      {"date_of_birth", AttrKind::Date, true, std::nullopt, std::nullopt},
      {"birth_year", AttrKind::Integer, true, LadderSpec{Direction::Lte, 1900, 2100}, std::nullopt},
      {"assessment_date", AttrKind::Date, true, std::nullopt, std::string(kDriverContextGroup)},
  };
  for (auto& a : driver_attributes()) s.attributes.push_back(std::move(a));
  s.attributes.push_back(incapacity_attribute());
  s.attributes.push_back({"detail", AttrKind::Text, false, std::nullopt, std::nullopt});
  return s;
}

SchemaDefinition make_fairness_for_all() {
  SchemaDefinition s;
  s.name = std::string(kFairnessForAllCredential);
  s.attributes = driver_attributes();
  s.attributes.push_back(incapacity_attribute());
  s.intended_audience = std::string(kFinancialAudience);
  return s;
}

}  // namespace

const SchemaDefinition& vulnerability_status_schema() {
  static const SchemaDefinition s = make_vulnerability_status();
  return s;
}

const SchemaDefinition& fairness_for_all_schema() {
  static const SchemaDefinition s = make_fairness_for_all();
  return s;
}

const SchemaDefinition* builtin_schema(std::string_view name) {
  if (name == kVulnerabilityStatusCredential) return &vulnerability_status_schema();
  if (name == kFairnessForAllCredential) return &fairness_for_all_schema();
  return nullptr;
}

// ------------------------------------------------------------- credentials

Value VerifiableCredential::id_basis() const {
  Value::List gs;
  for (const auto& g : groups) {
    Value::List members(g.members.begin(), g.members.end());
    gs.push_back(Value::Map{{"group_id", g.group_id}, {"members", std::move(members)}});
  }
  Value::Map m{{"claims_root", encode_bytes(claims_root)},
               {"expires_at", encode_instant(expires_at)},
               {"groups", std::move(gs)},
               {"issued_at", encode_instant(issued_at)},
               {"issuer", issuer.str()},
               {"schema", schema},
               {"status", Value::Map{{"index", status.index}, {"list_id", status.list_id}}},
               {"subject", subject.str()},
               {"suite", suite}};
  if (intended_audience) m["intended_audience"] = *intended_audience;
  return m;
}

Value VerifiableCredential::envelope_value() const {
  Value v = id_basis();
  v.as_map()["credential_id"] = credential_id;
  return v;
}

Value VerifiableCredential::to_value() const {
  Value v = envelope_value();
  v.as_map()["signature"] = encode_bytes(signature);
  return v;
}

VerifiableCredential VerifiableCredential::from_value(const Value& v) {
  expect_keys(v,
              {"claims_root", "credential_id", "expires_at", "groups", "issued_at", "issuer", "schema", "signature",
               "status", "subject", "suite"},
              {"intended_audience"});
  VerifiableCredential vc;
  vc.claims_root = decode_array<32>(v.at("claims_root"));
  vc.credential_id = v.at("credential_id").as_text();
  vc.expires_at = decode_instant(v.at("expires_at"));
  for (const auto& g : v.at("groups").as_list()) {
    expect_keys(g, {"group_id", "members"});
    DisclosureGroup group{g.at("group_id").as_text(), {}};
    for (const auto& m : g.at("members").as_list()) group.members.push_back(m.as_text());
    if (group.members.empty() || !std::is_sorted(group.members.begin(), group.members.end())) {
      fail(Errc::MalformedValue, "group members must be non-empty and sorted");
    }
    vc.groups.push_back(std::move(group));
  }
  vc.issued_at = decode_instant(v.at("issued_at"));
  vc.issuer = Did::parse(v.at("issuer").as_text());
  vc.schema = v.at("schema").as_text();
  vc.signature = decode_array<64>(v.at("signature"));
  const auto& st = v.at("status");
  expect_keys(st, {"index", "list_id"});
  vc.status = {st.at("list_id").as_text(), st.at("index").as_int()};
  vc.subject = Did::parse(v.at("subject").as_text());
  vc.suite = v.at("suite").as_text();
  if (auto a = v.find("intended_audience")) vc.intended_audience = a->as_text();
  return vc;
}

std::string derive_credential_id(const VerifiableCredential& vc) { return to_base32(digest_value(vc.id_basis())); }

Hash32 claim_commitment(const Salt& salt, std::string_view name, const Value& value) {
  Bytes buf(salt.begin(), salt.end());
  append(buf, canonicalize(Value(name)));
  append(buf, canonicalize(value));
  return digest(buf);
}

Hash32 claim_leaf(std::string_view name, const Hash32& commitment, const std::optional<LadderAnchor>& ladder) {
  Bytes buf{0x00};
  append(buf, canonicalize(Value(name)));
  append(buf, as_bytes(commitment));
  if (ladder) append(buf, ladder->leaf_bytes());
  return digest(buf);
}

std::optional<LadderAnchor> ClaimSecret::anchor() const {
  if (!ladder || !ladder_seed) return std::nullopt;
  return make_anchor(ladder->direction, ladder->v_min, ladder->v_max, value.as_int(), *ladder_seed);
}

const ClaimSecret* HolderSecrets::find(std::string_view name) const {
  for (const auto& c : claims) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<Hash32> HolderSecrets::leaves() const {
  std::vector<Hash32> out;
  out.reserve(claims.size());
  for (const auto& c : claims) out.push_back(c.leaf());
  return out;
}

std::size_t HolderSecrets::position(std::string_view name) const {
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (claims[i].name == name) return i;
  }
  fail(Errc::UnknownClaim, "no claim named " + std::string(name));
}

Value HolderSecrets::to_value() const {
  Value::List cs;
  for (const auto& c : claims) {
    Value::Map m{{"name", c.name}, {"salt", encode_bytes(c.salt)}, {"value", c.value}};
    if (c.ladder && c.ladder_seed) {
      m["ladder"] = Value::Map{{"direction", direction_name(c.ladder->direction)},
                               {"seed", encode_bytes(*c.ladder_seed)},
                               {"v_max", c.ladder->v_max},
                               {"v_min", c.ladder->v_min}};
    }
    cs.push_back(std::move(m));
  }
  return Value::Map{{"claims", std::move(cs)}, {"credential_id", credential_id}};
}

HolderSecrets HolderSecrets::from_value(const Value& v) {
  expect_keys(v, {"claims", "credential_id"});
  HolderSecrets s;
  s.credential_id = v.at("credential_id").as_text();
  for (const auto& c : v.at("claims").as_list()) {
    expect_keys(c, {"name", "salt", "value"}, {"ladder"});
    ClaimSecret cs;
    cs.name = c.at("name").as_text();
    cs.salt = decode_array<32>(c.at("salt"));
    cs.value = c.at("value");
    if (auto l = c.find("ladder")) {
      expect_keys(*l, {"direction", "seed", "v_max", "v_min"});
      cs.ladder = LadderSpec{parse_direction(l->at("direction").as_text()), l->at("v_min").as_int(),
                             l->at("v_max").as_int()};
      cs.ladder_seed = decode_array<32>(l->at("seed"));
    }
    s.claims.push_back(std::move(cs));
  }
  const bool sorted_unique = std::adjacent_find(s.claims.begin(), s.claims.end(), [](const auto& a, const auto& b) {
                               return !(a.name < b.name);
                             }) == s.claims.end();
  if (s.claims.empty() || !sorted_unique) fail(Errc::MalformedValue, "claims must be non-empty, sorted and unique");
  return s;
}

// ------------------------------------------------------- status allocation

namespace {
StatusRef slot_for(const std::string& prefix, std::int64_t global) {
  const auto per_list = static_cast<std::int64_t>(kStatusListBits);
  return {prefix + std::to_string(global / per_list), global % per_list};
}
}  // namespace

StatusRef StatusAllocator::next() {
  std::lock_guard lock(mu_);
  for (;;) {
    StatusRef ref = slot_for(prefix_, cursor_++);
    if (!used_.count(ref)) return ref;
  }
}

void StatusAllocator::claim(const StatusRef& ref) {
  if (ref.index < 0 || ref.index >= static_cast<std::int64_t>(kStatusListBits)) {
    fail(Errc::InvalidArgument, "status index out of range");
  }
  std::lock_guard lock(mu_);
  if (!used_.insert(ref).second) {
    fail(Errc::StatusSlotTaken, ref.list_id + "#" + std::to_string(ref.index) + " already assigned");
  }
}

void StatusAllocator::release(const StatusRef& ref) {
  std::lock_guard lock(mu_);
  used_.erase(ref);
}

bool StatusAllocator::taken(const StatusRef& ref) const {
  std::lock_guard lock(mu_);
  return used_.count(ref) != 0;
}

// ----------------------------------------------------------------- issuing

namespace {

Value check_kind(const AttributeSpec& spec, const Value& v) {
  auto violation = [&](const char* want) {
    fail(Errc::SchemaViolation, spec.name + " must be " + want);
  };
  switch (spec.kind) {
    case AttrKind::Text:
      if (!v.is_text()) violation("text");
      return v;
    case AttrKind::Integer:
      if (v.type() != Value::Type::Int) violation("an integer");
      return v;
    case AttrKind::Boolean:
      if (v.type() != Value::Type::Bool) violation("a boolean");
      return v;
    case AttrKind::Date:
      try {
        return Value(v.as_date());
      } catch (const Error&) {
        violation("a valid YYYY-MM-DD date");
      }
  }
  return v;
}

}  // namespace

IssuedCredential issue(const SchemaDefinition& schema, const KeyPair& issuer_keys, const Did& issuer,
                       const Did& subject, const Value::Map& values, const StatusRef& slot, StatusAllocator& slots,
                       Instant now, int validity_months) {
  if (validity_months <= 0) fail(Errc::InvalidArgument, "validity must be positive");
  slots.claim(slot);
  try {
    for (const auto& [name, _] : values) {
      if (!schema.find(name)) fail(Errc::SchemaViolation, "attribute " + name + " not in " + schema.name);
    }
    HolderSecrets secrets;
    for (const auto& spec : schema.attributes) {
      auto it = values.find(spec.name);
      if (it == values.end()) {
        if (spec.required) fail(Errc::SchemaViolation, "missing required attribute " + spec.name);
        continue;
      }
      ClaimSecret c;
      c.name = spec.name;
      c.value = check_kind(spec, it->second);
      c.salt = random_array<32>();
      if (spec.ladder) {
        c.ladder = spec.ladder;
        c.ladder_seed = random_array<32>();
        c.anchor();  // range check: throws LadderOutOfRange
      }
      secrets.claims.push_back(std::move(c));
    }
    std::sort(secrets.claims.begin(), secrets.claims.end(),
              [](const ClaimSecret& a, const ClaimSecret& b) { return a.name < b.name; });

    VerifiableCredential vc;
    vc.schema = schema.name;
    vc.issuer = issuer;
    vc.subject = subject;
    vc.issued_at = now;
    vc.expires_at = add_months(now, validity_months);
    vc.intended_audience = schema.intended_audience;
    vc.status = slot;
    vc.claims_root = secrets.root();
    for (auto g : schema.groups()) {
      std::erase_if(g.members, [&](const std::string& m) { return !secrets.find(m); });
      if (!g.members.empty()) vc.groups.push_back(std::move(g));
    }
    vc.credential_id = derive_credential_id(vc);
    vc.signature = sign(issuer_keys.secret, as_bytes(canonicalize(vc.envelope_value())));
    secrets.credential_id = vc.credential_id;
    return {std::move(vc), std::move(secrets)};
  } catch (...) {
    slots.release(slot);
    throw;
  }
}

// ------------------------------------------------------------ verification

std::string_view fail_reason_name(FailReason r) noexcept {
  switch (r) {
    case FailReason::Malformed: return "Malformed";
    case FailReason::SignatureInvalid: return "SignatureInvalid";
    case FailReason::IssuerUnresolvable: return "IssuerUnresolvable";
    case FailReason::Expired: return "Expired";
    case FailReason::Revoked: return "Revoked";
    case FailReason::StatusUnavailable: return "StatusUnavailable";
    case FailReason::PathMismatch: return "PathMismatch";
    case FailReason::PredicateInvalid: return "PredicateInvalid";
    case FailReason::HolderBindingInvalid: return "HolderBindingInvalid";
    case FailReason::NonceMismatch: return "NonceMismatch";
    case FailReason::NonceReplayed: return "NonceReplayed";
    case FailReason::GroupViolation: return "GroupViolation";
  }
  return "Unknown";
}

std::optional<FailReason> parse_fail_reason(std::string_view s) noexcept {
  for (int i = 0; i <= static_cast<int>(FailReason::GroupViolation); ++i) {
    auto r = static_cast<FailReason>(i);
    if (fail_reason_name(r) == s) return r;
  }
  return std::nullopt;
}

Verdict verify_full(const VerifiableCredential& vc, const RegistryView& registry, Instant now) {
  DidDocument issuer_doc;
  try {
    issuer_doc = registry.resolve(vc.issuer);
  } catch (const Error& e) {
    if (e.code() == Errc::NotFound || e.code() == Errc::ChainBroken || e.code() == Errc::MalformedValue) {
      return Verdict::fail(FailReason::IssuerUnresolvable);
    }
    throw;
  }
  if (vc.suite != kSuiteId || vc.credential_id != derive_credential_id(vc) ||
      !verify_signature(issuer_doc.verification_key, as_bytes(canonicalize(vc.envelope_value())), vc.signature)) {
    return Verdict::fail(FailReason::SignatureInvalid);
  }
  if (!(now < vc.expires_at)) return Verdict::fail(FailReason::Expired);
  if (vc.status.index < 0 || vc.status.index >= static_cast<std::int64_t>(kStatusListBits)) {
    return Verdict::fail(FailReason::StatusUnavailable);
  }
  try {
    const StatusList list = registry.latest_status(vc.issuer, vc.status.list_id);
    if (list.test(static_cast<std::size_t>(vc.status.index))) return Verdict::fail(FailReason::Revoked);
  } catch (const Error& e) {
    if (e.code() == Errc::NotFound) return Verdict::fail(FailReason::StatusUnavailable);
    throw;
  }
  return Verdict::pass();
}

void ensure_status_list(const KeyPair& issuer_keys, const Did& issuer, const std::string& list_id,
                        RegistryClient& registry) {
  try {
    registry.latest_status(issuer, list_id);
    return;
  } catch (const Error& e) {
    if (e.code() != Errc::NotFound) throw;
  }
  StatusList list;
  list.issuer = issuer;
  list.list_id = list_id;
  registry.publish_status(sign_status(list, issuer_keys.secret));
}

StatusList revoke(const KeyPair& issuer_keys, const Did& issuer, const StatusRef& ref, RegistryClient& registry) {
  const DidDocument doc = registry.resolve(issuer);
  if (doc.verification_key != issuer_keys.public_key) {
    fail(Errc::Unauthorized, "key does not control " + issuer.str());
  }
  StatusList list = registry.latest_status(issuer, ref.list_id);
  if (ref.index < 0 || ref.index >= static_cast<std::int64_t>(kStatusListBits)) {
    fail(Errc::NotFound, "status index out of range");
  }
  if (list.test(static_cast<std::size_t>(ref.index))) return list;
  list.set(static_cast<std::size_t>(ref.index));
  ++list.version;
  registry.publish_status(sign_status(list, issuer_keys.secret));
  return list;
}

}  // namespace vsc
