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

#include "vsc/exchange.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace vsc {

RequestItem RequestItem::reveal(std::string claim) { return {std::move(claim), ItemMode::Reveal, std::nullopt}; }

RequestItem RequestItem::threshold(std::string claim, Direction op, std::int64_t threshold) {
  RequestItem item{claim, ItemMode::Predicate, PredicateRequest{claim, op, threshold}};
  return item;
}

Value RequestItem::to_value() const {
  Value::Map m{{"claim", claim}, {"mode", mode == ItemMode::Reveal ? "REVEAL" : "PREDICATE"}};
  if (predicate) m["predicate"] = Value::Map{{"op", direction_name(predicate->op)}, {"threshold", predicate->threshold}};
  return m;
}

RequestItem RequestItem::from_value(const Value& v) {
  expect_keys(v, {"claim", "mode"}, {"predicate"});
  RequestItem item;
  item.claim = v.at("claim").as_text();
  const auto& mode = v.at("mode").as_text();
  if (mode == "REVEAL") {
    item.mode = ItemMode::Reveal;
  } else if (mode == "PREDICATE") {
    item.mode = ItemMode::Predicate;
  } else {
    fail(Errc::MalformedValue, "unknown item mode " + mode);
  }
  if (auto p = v.find("predicate")) {
    expect_keys(*p, {"op", "threshold"});
    item.predicate = PredicateRequest{item.claim, parse_direction(p->at("op").as_text()), p->at("threshold").as_int()};
  }
  return item;
}

RequestItem age_at_least(int years, const Date& on) {
  return RequestItem::threshold("birth_year", Direction::Lte, on.year - years);
}

void PresentationRequest::check_shape() const {
  if (scheme && !items.empty()) fail(Errc::InvalidShape, "scheme requests carry no items");
  if (!scheme && items.empty()) fail(Errc::InvalidShape, "itemized request without items");
  for (const auto& item : items) {
    const bool is_pred = item.mode == ItemMode::Predicate;
    if (is_pred != item.predicate.has_value()) fail(Errc::InvalidShape, "predicate item mismatch for " + item.claim);
    if (item.predicate && item.predicate->claim != item.claim) fail(Errc::InvalidShape, "predicate names another claim");
  }
}

Value PresentationRequest::to_value() const {
  Value::List list;
  for (const auto& item : items) list.push_back(item.to_value());
  Value::Map m{{"expires_at", encode_instant(expires_at)},
               {"items", std::move(list)},
               {"nonce", encode_bytes(nonce)},
               {"purpose", purpose},
               {"request_id", request_id},
               {"verifier", verifier.str()},
               {"verifier_endpoint", verifier_endpoint}};
  if (scheme) m["scheme"] = *scheme;
  if (audience) m["audience"] = *audience;
  return m;
}

PresentationRequest PresentationRequest::from_value(const Value& v) {
  expect_keys(v, {"expires_at", "items", "nonce", "purpose", "request_id", "verifier", "verifier_endpoint"},
              {"scheme", "audience"});
  PresentationRequest r;
  r.expires_at = decode_instant(v.at("expires_at"));
  for (const auto& item : v.at("items").as_list()) r.items.push_back(RequestItem::from_value(item));
  r.nonce = decode_array<16>(v.at("nonce"));
  r.purpose = v.at("purpose").as_text();
  r.request_id = v.at("request_id").as_text();
  r.verifier = Did::parse(v.at("verifier").as_text());
  r.verifier_endpoint = v.at("verifier_endpoint").as_text();
  if (auto s = v.find("scheme")) r.scheme = s->as_text();
  if (auto a = v.find("audience")) r.audience = a->as_text();
  return r;
}

std::string_view outcome_name(Outcome o) noexcept { return o == Outcome::Presented ? "PRESENTED" : "DENIED"; }

Value PresentationResponse::to_value() const {
  Value::Map m{{"outcome", outcome_name(outcome)}, {"request_id", request_id}};
  if (presentation) m["presentation"] = presentation->to_value();
  return m;
}

PresentationResponse PresentationResponse::from_value(const Value& v) {
  expect_keys(v, {"outcome", "request_id"}, {"presentation"});
  PresentationResponse r;
  r.request_id = v.at("request_id").as_text();
  const auto& o = v.at("outcome").as_text();
  if (o == "PRESENTED") {
    r.outcome = Outcome::Presented;
  } else if (o == "DENIED") {
    r.outcome = Outcome::Denied;
  } else {
    fail(Errc::MalformedValue, "unknown outcome " + o);
  }
  if (auto p = v.find("presentation")) r.presentation = Presentation::from_value(*p);
  if ((r.outcome == Outcome::Presented) != r.presentation.has_value()) {
    fail(Errc::MalformedValue, "presentation must accompany exactly the PRESENTED outcome");
  }
  return r;
}

Value ScenarioSpec::to_value() const {
  Value::Map m{{"purpose", purpose}};
  if (scheme) m["scheme"] = *scheme;
  if (!items.empty()) {
    Value::List l;
    for (const auto& i : items) l.push_back(i.to_value());
    m["items"] = std::move(l);
  }
  return m;
}

ScenarioSpec ScenarioSpec::from_value(const Value& v) {
  expect_keys(v, {"purpose"}, {"scheme", "items"});
  ScenarioSpec s;
  s.purpose = v.at("purpose").as_text();
  if (auto x = v.find("scheme")) s.scheme = x->as_text();
  if (auto x = v.find("items")) {
    for (const auto& i : x->as_list()) s.items.push_back(RequestItem::from_value(i));
  }
  return s;
}

Value VerificationOutcome::to_value() const {
  Value::List f;
  for (const auto& x : facts) f.push_back(x.to_value());
  return Value::Map{{"request_id", request_id},
                    {"customer_ref", customer_ref},
                    {"outcome", outcome_name(outcome)},
                    {"verdict", verdict.str()},
                    {"facts", std::move(f)},
                    {"received_at", encode_instant(received_at)}};
}

std::string random_uuid() {
  auto b = random_array<16>();
  b[6] = static_cast<std::uint8_t>((b[6] & 0x0f) | 0x40);
  b[8] = static_cast<std::uint8_t>((b[8] & 0x3f) | 0x80);
  const std::string h = to_hex(b);
  return h.substr(0, 8) + "-" + h.substr(8, 4) + "-" + h.substr(12, 4) + "-" + h.substr(16, 4) + "-" + h.substr(20);
}

PresentationRequest build_request(const Did& verifier, std::string verifier_endpoint,
                                  std::optional<std::string> audience, const ScenarioSpec& spec, Instant now,
                                  NonceCache& nonces, std::int64_t lifetime) {
  PresentationRequest r;
  r.request_id = random_uuid();
  r.verifier = verifier;
  r.nonce = random_array<16>();
  r.scheme = spec.scheme;
  r.items = spec.items;
  r.purpose = spec.purpose;
  r.expires_at = now + lifetime;
  r.verifier_endpoint = std::move(verifier_endpoint);
  r.audience = std::move(audience);
  r.check_shape();
  nonces.issue(r.nonce, r.expires_at, now);
  return r;
}

// ------------------------------------------------------------ holder side

std::string_view consent_kind_name(ConsentKind k) noexcept {
  switch (k) {
    case ConsentKind::AcceptAll: return "ACCEPT_ALL";
    case ConsentKind::Deny: return "DENY";
    case ConsentKind::Partial: return "PARTIAL";
  }
  return "DENY";
}

ConsentKind parse_consent_kind(std::string_view s) {
  if (s == "ACCEPT_ALL") return ConsentKind::AcceptAll;
  if (s == "DENY") return ConsentKind::Deny;
  if (s == "PARTIAL") return ConsentKind::Partial;
  fail(Errc::MalformedValue, "unknown decision " + std::string(s));
}

namespace {

/// Latest-issued live credential of `holder` satisfying `pred`.
template <class Pred>
const HeldCredential* pick(const std::vector<HeldCredential>& wallet, const Did& holder, Instant now, Pred pred) {
  const HeldCredential* best = nullptr;
  for (const auto& h : wallet) {
    if (h.credential.subject != holder || !(now < h.credential.expires_at) || !pred(h)) continue;
    if (!best || best->credential.issued_at < h.credential.issued_at) best = &h;
  }
  return best;
}

DisclosureSelection select_items(const PresentationRequest& req, const VerifiableCredential& vc,
                                 const std::vector<std::size_t>& granted) {
  std::vector<std::string> requested, chosen;
  DisclosureSelection sel;
  for (const auto& item : req.items) {
    if (item.mode == ItemMode::Reveal) requested.push_back(item.claim);
  }
  for (auto i : granted) {
    const auto& item = req.items[i];
    if (item.mode == ItemMode::Reveal) {
      chosen.push_back(item.claim);
    } else {
      sel.predicates.push_back(*item.predicate);
    }
  }
  // A grant that touches a group must cover every requested member of it.
  const std::set<std::string> chosen_set(chosen.begin(), chosen.end());
  for (const auto& g : vc.groups) {
    bool touched = false, missing = false;
    for (const auto& m : g.members) {
      const bool asked = std::find(requested.begin(), requested.end(), m) != requested.end();
      if (chosen_set.count(m)) touched = true;
      if (asked && !chosen_set.count(m)) missing = true;
    }
    if (touched && missing) fail(Errc::GroupViolation, "grant splits disclosure group " + g.group_id);
  }
  sel.reveal = expand_groups(vc, chosen);
  return sel;
}

}  // namespace

HandleResult handle_request(const PresentationRequest& req, const std::vector<HeldCredential>& wallet,
                            const HolderIdentity& holder, const ConsentDecision& consent, Instant now) {
  HandleResult out{PresentationResponse::denied(req.request_id), std::nullopt, {}, std::nullopt};
  try {
    if (consent.request_id != req.request_id) fail(Errc::InvalidArgument, "decision is for another request");
    if (consent.kind == ConsentKind::Deny) return out;
    if (!(now < req.expires_at)) fail(Errc::RequestExpired, "request expired at " + req.expires_at.iso());
    req.check_shape();

    const HeldCredential* held = nullptr;
    DisclosureSelection sel;
    if (!req.itemized()) {
      if (consent.kind != ConsentKind::AcceptAll) fail(Errc::InvalidShape, "scheme requests take accept or deny");
      if (*req.scheme != kFairnessForAllScheme) fail(Errc::InvalidShape, "unsupported scheme " + *req.scheme);
      held = pick(wallet, holder.did, now,
                  [](const HeldCredential& h) { return h.credential.schema == kFairnessForAllCredential; });
      if (!held) fail(Errc::NotFound, "no Fairness for All credential in the wallet");
      for (const auto& c : held->secrets.claims) sel.reveal.push_back(c.name);
    } else {
      std::vector<std::size_t> granted;
      if (consent.kind == ConsentKind::AcceptAll) {
        for (std::size_t i = 0; i < req.items.size(); ++i) granted.push_back(i);
      } else {
        std::set<std::size_t> uniq(consent.granted.begin(), consent.granted.end());
        for (auto i : uniq) {
          if (i >= req.items.size()) fail(Errc::InvalidArgument, "granted index out of range");
        }
        granted.assign(uniq.begin(), uniq.end());
      }
      if (granted.empty()) return out;
      held = pick(wallet, holder.did, now, [&](const HeldCredential& h) {
        return std::all_of(granted.begin(), granted.end(),
                           [&](std::size_t i) { return h.secrets.find(req.items[i].claim) != nullptr; });
      });
      if (!held) fail(Errc::UnknownClaim, "no single credential holds every granted claim");
      sel = select_items(req, held->credential, granted);
    }

    DeriveContext ctx{holder.keys, holder.did, req.verifier, req.nonce, now, req.audience};
    Presentation p = derive(held->credential, held->secrets, sel, ctx);
    for (const auto& d : p.disclosed) out.shared.push_back(d.name);
    for (const auto& pr : p.predicates) {
      out.shared.push_back(pr.claim + " " + std::string(direction_name(pr.op)) + " " + std::to_string(pr.threshold));
    }
    out.credential_id = held->credential.credential_id;
    out.response.outcome = Outcome::Presented;
    out.response.presentation = std::move(p);
  } catch (const Error& e) {
    out.response = PresentationResponse::denied(req.request_id);
    out.shared.clear();
    out.credential_id.reset();
    out.local_error = e;
  }
  return out;
}

// ---------------------------------------------------------- verifier side

VerifierExchange::VerifierExchange(Did verifier, std::string endpoint, std::optional<std::string> audience,
                                   const RegistryView& registry, NonceCache& nonces)
    : verifier_(std::move(verifier)),
      endpoint_(std::move(endpoint)),
      audience_(std::move(audience)),
      registry_(registry),
      nonces_(nonces) {}

void VerifierExchange::set_endpoint(std::string endpoint) {
  std::lock_guard lock(mu_);
  endpoint_ = std::move(endpoint);
}

PresentationRequest VerifierExchange::open(const std::string& customer_ref, std::optional<Did> holder,
                                           const ScenarioSpec& spec, Instant now) {
  std::unique_lock lock(mu_);
  const auto endpoint = endpoint_;
  lock.unlock();
  auto req = build_request(verifier_, endpoint, audience_, spec, now, nonces_);
  lock.lock();
  pending_.emplace(req.request_id, Pending{req, customer_ref, std::move(holder), false});
  return req;
}

VerificationOutcome VerifierExchange::receive(const PresentationResponse& resp, Instant now) {
  Pending snapshot;
  bool replay = false;
  {
    std::lock_guard lock(mu_);
    auto it = pending_.find(resp.request_id);
    if (it == pending_.end()) fail(Errc::UnknownRequest, "no request " + resp.request_id);
    if (it->second.responded) {
      if (resp.outcome == Outcome::Denied) fail(Errc::AlreadyDecided, "request already answered");
      replay = true;
    } else {
      if (!(now < it->second.request.expires_at)) fail(Errc::RequestExpired, "request expired");
      it->second.responded = true;
    }
    snapshot = it->second;
  }

  VerificationOutcome out;
  out.request_id = resp.request_id;
  out.customer_ref = snapshot.customer_ref;
  out.outcome = resp.outcome;
  out.received_at = now;
  if (resp.outcome == Outcome::Denied) return out;
  if (replay) {
    out.verdict = Verdict::fail(FailReason::NonceReplayed);
    return out;
  }
  const Presentation& p = *resp.presentation;
  if (snapshot.holder && p.holder != *snapshot.holder) {
    out.verdict = Verdict::fail(FailReason::HolderBindingInvalid);
    return out;
  }
  auto pv = verify_presentation(p, registry_, snapshot.request.nonce, verifier_, now, nonces_);
  out.verdict = pv.verdict;
  out.facts = std::move(pv.facts);
  return out;
}

std::optional<std::string> VerifierExchange::customer_of(const std::string& request_id) const {
  std::lock_guard lock(mu_);
  auto it = pending_.find(request_id);
  if (it == pending_.end()) return std::nullopt;
  return it->second.customer_ref;
}

void VerifierExchange::prune(Instant now, std::int64_t keep) {
  std::lock_guard lock(mu_);
  std::erase_if(pending_, [&](const auto& kv) { return kv.second.request.expires_at + keep < now; });
}

}  // namespace vsc
